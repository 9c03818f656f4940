#include "dtcwt/diagnostics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "dtcwt/io.hpp"

namespace dtcwt {

namespace fs = std::filesystem;

double DiagnosticReport::metric(const std::string& key) const {
    const auto it = metrics.find(key);
    if (it == metrics.end()) throw OutOfRange(name + ": no metric '" + key + "'");
    return it->second;
}

std::string DiagnosticReport::to_text() const {
    std::ostringstream out;
    out << "name = " << name << '\n' << "status = " << status << '\n';
    for (const auto& [k, v] : metrics) out << k << " = " << io::format_double(v) << '\n';
    for (const auto& a : artifacts) out << "artifact = " << a.string() << '\n';
    return out.str();
}

void DiagnosticReport::write(const fs::path& path) const {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << to_text();
}

EdgeMask EdgeMask::around(Index n, const std::vector<Index>& edges, Index radius) {
    EdgeMask m;
    m.near = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(n, false);
    for (Index e : edges) {
        for (Index d = -radius; d <= radius; ++d) m.near(detail::wrap(e + d, n)) = true;
    }
    return m;
}

Signald step_edge_signal(Index n, Index edge) {
    Signald x(n);
    for (Index i = 0; i < n; ++i) x(i) = i < edge ? 0.0 : 1.0;
    return x;
}

namespace {

Signald roll(const Signald& x, Index s) {
    Signald y(x.size());
    for (Index i = 0; i < x.size(); ++i) y(detail::wrap(i + s, x.size())) = x(i);
    return y;
}

Signald iota(Index n) { return Signald::LinSpaced(n, 0.0, static_cast<double>(n - 1)); }

void emit_columns(DiagnosticReport& r, const fs::path& dir, const std::string& file,
                  const std::vector<std::string>& names, const std::vector<Signald>& cols) {
    if (dir.empty()) return;
    fs::create_directories(dir);
    io::write_columns_csv(dir / file, names, cols);
    r.artifacts.push_back(dir / file);
}

void emit_image(DiagnosticReport& r, const fs::path& dir, const std::string& file,
                const Imaged& img) {
    if (dir.empty()) return;
    fs::create_directories(dir);
    io::write_csv(dir / file, img);
    r.artifacts.push_back(dir / file);
}

}  // namespace

DiagnosticReport diag_shift_variance(const DualTreeFilterSetd& fs, const Filterd& filter,
                                     int level, const ShiftVarianceOptions& opt) {
    if (level < 1) throw OutOfRange("diag_shift_variance: level must be >= 1");
    require_dyadic(opt.length, level, "diag_shift_variance");
    DiagnosticReport r;
    r.name = "shift";
    const Signald x = opt.amplitude * step_edge_signal(opt.length, opt.edge);
    const Signald xs = roll(x, opt.shift);
    const double per = std::ldexp(1.0, level);
    const Index roll_coeffs = static_cast<Index>(std::floor(opt.shift / per + 0.5));

    const Signald c = dwt1d_forward(x, filter, level).details[level - 1];
    const Signald cs = dwt1d_forward(xs, filter, level).details[level - 1];
    const Signald m = dtcwt1d_forward(x, fs, level).magnitude(level);
    const Signald ms = dtcwt1d_forward(xs, fs, level).magnitude(level);

    auto delta = [&](const Signald& a, const Signald& b) {
        return (b - roll(a, roll_coeffs)).norm() / a.norm();
    };
    r.metrics["level"] = level;
    r.metrics["shift"] = static_cast<double>(opt.shift);
    if (c.norm() == 0.0 || m.norm() == 0.0) {
        r.status = "degenerate";
    } else {
        r.metrics["delta_dwt"] = delta(c, cs);
        r.metrics["delta_dtcwt"] = delta(m, ms);
        r.metrics["ratio"] = r.metrics["delta_dtcwt"] / r.metrics["delta_dwt"];
    }

    emit_columns(r, opt.out_dir, "shift_signal.csv", {"n", "x", "x_shifted"},
                 {iota(x.size()), x, xs});
    emit_columns(r, opt.out_dir, "shift_dwt.csv", {"k", "coeff", "coeff_shifted"},
                 {iota(c.size()), c, cs});
    emit_columns(r, opt.out_dir, "shift_dtcwt.csv", {"k", "magnitude", "magnitude_shifted"},
                 {iota(m.size()), m, ms});
    return r;
}

AliasingScene aliasing_scene(Index n) {
    AliasingScene s;
    s.signal.resize(n);
    s.edges = {n / 4, (5 * n) / 8, (7 * n) / 8};
    for (Index i = 0; i < n; ++i) {
        double v = 0.25 * std::sin(2.0 * std::numbers::pi * i / n);
        if (i >= s.edges[0] && i < s.edges[1]) v += 1.0;
        if (i >= s.edges[1] && i < s.edges[2]) v += 0.5;
        s.signal(i) = v;
    }
    return s;
}

namespace {

Signald quantized(const Signald& x, int q) { return q == 0 ? x : quantize_uniform(x, q); }

void quantize_pyramid(Pyramid1Dd& p, int q) {
    p.approx = quantized(p.approx, q);
    for (auto& d : p.details) d = quantized(d, q);
}

}  // namespace

DiagnosticReport diag_aliasing(const DualTreeFilterSetd& fs, const Filterd& filter, int levels,
                               int qlevels, const fs::path& out_dir) {
    if (levels < 1) throw OutOfRange("diag_aliasing: levels must be >= 1");
    if (qlevels == 1 || qlevels < 0) throw OutOfRange("diag_aliasing: qlevels must be 0 or >= 2");
    const auto scene = aliasing_scene();
    const Signald& x = scene.signal;
    require_dyadic(x.size(), levels, "diag_aliasing");

    const Signald a = quantized(x, qlevels);

    auto p = dwt1d_forward(x, filter, levels);
    quantize_pyramid(p, qlevels);
    const Signald b_dwt = dwt1d_inverse(p, filter);

    auto dp = dtcwt1d_forward(x, fs, levels);
    std::array<Pyramid1Dd, 2> trees{dp.tree(0), dp.tree(1)};
    for (auto& t : trees) quantize_pyramid(t, qlevels);
    const Signald b_dt = dtcwt1d_inverse(DualTreePyramid1Dd::from_trees(trees[0], trees[1]), fs);

    const Signald off = EdgeMask::around(x.size(), scene.edges, filter.size()).off_edge();
    DiagnosticReport r;
    r.name = "alias";
    r.metrics["levels"] = levels;
    r.metrics["qlevels"] = qlevels;
    r.metrics["artifact_dwt"] = (b_dwt - a).cwiseProduct(off).squaredNorm();
    r.metrics["artifact_dtcwt"] = (b_dt - a).cwiseProduct(off).squaredNorm();
    if (r.metrics["artifact_dwt"] > 0) {
        r.metrics["ratio"] = r.metrics["artifact_dtcwt"] / r.metrics["artifact_dwt"];
    }
    emit_columns(r, out_dir, "alias_panels.csv",
                 {"n", "signal", "quantized", "dwt_quantized", "dtcwt_quantized", "off_edge"},
                 {iota(x.size()), x, a, b_dwt, b_dt, off});
    return r;
}

EdgeScene edge_scene(Index size) {
    if (size < 16) throw InvalidLength("edge_scene: size must be >= 16");
    const double s = static_cast<double>(size);
    // triangle: r >= t0, c >= t0, r + c <= t0 + t1
    const double t0 = 0.1875 * s, t1 = 0.6875 * s;
    const double cr = 0.6875 * s, cc = 0.6875 * s, radius = 0.15625 * s;
    EdgeScene out;
    out.image = Imaged::Zero(size, size);
    for (Index r = 0; r < size; ++r) {
        for (Index c = 0; c < size; ++c) {
            const bool tri = r >= t0 && c >= t0 && r + c <= t0 + t1;
            const bool disk = (r - cr) * (r - cr) + (c - cc) * (c - cc) <= radius * radius;
            if (tri || disk) out.image(r, c) = 1.0;
        }
    }
    const double lo = t0 - 0.5, hi = t1 + 0.5;
    out.edges = {{"horizontal", lo, t0, lo, hi},
                 {"vertical", t0, lo, hi, lo},
                 {"diagonal", t0, hi, hi, t0}};
    return out;
}

double edge_artifact(const Imaged& recon, const EdgeSegment& e, double halfwidth) {
    const double dr = e.r1 - e.r0, dc = e.c1 - e.c0;
    const double len = std::hypot(dr, dc);
    if (len == 0) throw OutOfRange("edge_artifact: zero-length edge");
    const double ur = dr / len, uc = dc / len;  // along the edge
    const double nr = -uc, nc = ur;             // normal
    std::map<long, std::pair<double, std::vector<double>>> bins;
    for (Index r = 0; r < recon.rows(); ++r) {
        for (Index c = 0; c < recon.cols(); ++c) {
            const double pr = r - e.r0, pc = c - e.c0;
            const double t = (pr * ur + pc * uc) / len;
            const double d = pr * nr + pc * nc;
            if (t < 0.25 || t > 0.75 || std::abs(d) > halfwidth) continue;
            auto& bin = bins[std::lround(d * 2.0)];
            bin.first += recon(r, c);
            bin.second.push_back(recon(r, c));
        }
    }
    double dev = 0, total = 0;
    for (const auto& [key, bin] : bins) {
        const double mean = bin.first / static_cast<double>(bin.second.size());
        for (double v : bin.second) {
            dev += (v - mean) * (v - mean);
            total += v * v;
        }
    }
    return total == 0 ? 0.0 : dev / total;
}

DiagnosticReport diag_band_reconstruction(const DualTreeFilterSetd& fs, const Filterd& filter,
                                          const EdgeScene& scene, int level, Variant v,
                                          const fs::path& out_dir) {
    if (level < 1) throw OutOfRange("diag_band_reconstruction: level must be >= 1");
    const Imaged& x = scene.image;
    require_dyadic_2d(x.rows(), x.cols(), level, "diag_band_reconstruction");

    const Imaged dwt = reconstruct_single_level(dwt2d_forward(x, filter, level), filter, level);
    const Imaged dt =
        v == Variant::Real
            ? dtcwt2d_real_inverse(keep_single_level(dtcwt2d_real_forward(x, fs, level), level), fs)
            : dtcwt2d_complex_inverse(
                  keep_single_level(dtcwt2d_complex_forward(x, fs, level), level), fs);

    DiagnosticReport r;
    r.name = "band-recon";
    r.metrics["level"] = level;
    for (const auto& e : scene.edges) {
        r.metrics["dwt_" + e.name] = edge_artifact(dwt, e);
        r.metrics["dtcwt_" + e.name] = edge_artifact(dt, e);
    }
    emit_image(r, out_dir, "band_recon_input.csv", x);
    emit_image(r, out_dir, "band_recon_dwt.csv", dwt);
    emit_image(r, out_dir, "band_recon_dtcwt.csv", dt);
    return r;
}

namespace {

// Norm that is exactly invariant under permutation and sign changes.
double order_free_norm(const Signald& v) {
    std::vector<double> a(v.size());
    for (Index i = 0; i < v.size(); ++i) a[i] = std::abs(v(i));
    std::sort(a.begin(), a.end());
    double s = 0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
}

}  // namespace

double compare_filters(const Signald& f, const Signald& ref) {
    const Index n = std::max(f.size(), ref.size());
    Signald a = Signald::Zero(n), b = Signald::Zero(n);
    a.head(f.size()) = f;
    b.head(ref.size()) = ref;
    const double denom = order_free_norm(a) * order_free_norm(b);
    if (denom == 0) throw NumericError("compare_filters: zero-norm filter");
    double best = -std::numeric_limits<double>::infinity();
    for (const Signald& g : {a, Signald(a.reverse())}) {
        for (Index s = 0; s < n; ++s) {
            const double ip = roll(g, s).dot(b);
            best = std::max(best, std::abs(ip));
        }
    }
    return std::clamp(1.0 - best / denom, 0.0, 1.0);
}

Orientation2D orientation_purity(const Imaged& m) {
    if ((m.array() < 0).any()) throw OutOfRange("orientation_purity: image must be nonnegative");
    const double w = m.sum();
    if (!(w > 0)) throw NumericError("orientation_purity: undefined for an all-zero image");
    double mr = 0, mc = 0;
    for (Index c = 0; c < m.cols(); ++c) {
        for (Index r = 0; r < m.rows(); ++r) {
            mr += r * m(r, c);
            mc += c * m(r, c);
        }
    }
    mr /= w;
    mc /= w;
    Eigen::Matrix2d s = Eigen::Matrix2d::Zero();  // (col, row) coordinates
    for (Index c = 0; c < m.cols(); ++c) {
        for (Index r = 0; r < m.rows(); ++r) {
            const double x = c - mc, y = r - mr;
            s(0, 0) += m(r, c) * x * x;
            s(0, 1) += m(r, c) * x * y;
            s(1, 1) += m(r, c) * y * y;
        }
    }
    s(1, 0) = s(0, 1);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(s);
    const double lmin = es.eigenvalues()(0), lmax = es.eigenvalues()(1);
    const Eigen::Vector2d v = es.eigenvectors().col(1);
    double angle = std::atan2(v(1), v(0));
    if (angle < 0) angle += std::numbers::pi;
    if (angle >= std::numbers::pi) angle -= std::numbers::pi;
    const double purity = lmax + lmin > 0 ? (lmax - lmin) / (lmax + lmin) : 0.0;
    return {angle, purity};
}

int count_distinct_angles(const std::vector<double>& angles, double min_separation) {
    const int n = static_cast<int>(angles.size());
    if (n > 20) throw OutOfRange("count_distinct_angles: too many angles");
    auto apart = [&](double a, double b) {
        double d = std::fmod(std::abs(a - b), std::numbers::pi);
        return std::min(d, std::numbers::pi - d) >= min_separation;
    };
    int best = 0;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        const int size = std::popcount(mask);
        if (size <= best) continue;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            for (int j = i + 1; j < n && ok; ++j) {
                if ((mask >> i & 1u) && (mask >> j & 1u)) ok = apart(angles[i], angles[j]);
            }
        }
        if (ok) best = size;
    }
    return best;
}

DirectionalityResult directionality(const DualTreeFilterSetd& fs, int scale, Variant v,
                                    double min_separation_deg) {
    const int size = learn::impulse_size(fs.h1.size(), scale);
    DirectionalityResult out;
    std::vector<double> angles;
    out.min_purity = 1.0;
    for (int b = 0; b < 6; ++b) {
        out.bands[b] =
            orientation_purity(learn::impulse_response(fs, b + 1, scale, v, size).magnitude());
        angles.push_back(out.bands[b].angle);
        out.min_purity = std::min(out.min_purity, out.bands[b].purity);
    }
    out.distinct_angles =
        count_distinct_angles(angles, min_separation_deg * std::numbers::pi / 180.0);
    return out;
}

}  // namespace dtcwt
