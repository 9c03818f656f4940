#include "dtcwt/learn/loss.hpp"

#include <cmath>
#include <thread>

namespace dtcwt::learn {

void LossWeights::validate() const {
    if (!(lambda1 >= 0 && lambda2 >= 0 && lambda3 >= 0)) {
        throw OutOfRange("loss weights must be non-negative");
    }
}

Imaged GaussianTarget::matrix() const {
    if (size < 1) throw OutOfRange("gaussian target: size must be >= 1");
    Imaged g(size, size);
    const double c = center();
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            const double r2 = (i - c) * (i - c) + (j - c) * (j - c);
            g(i, j) = alpha * std::exp(-r2 / (2.0 * sigma * sigma));
        }
    }
    return g;
}

double loss_wavelet_constraint(const Filterd& h) {
    const double k = static_cast<double>(h.size());
    const double norm = h.taps().norm();
    const double mu_h = h.taps().mean();
    const double mu_g = derive_wavelet_filter(h).taps().mean();
    return (norm - 1.0) * (norm - 1.0) + (mu_h - std::sqrt(2.0) / k) * (mu_h - std::sqrt(2.0) / k) +
           mu_g * mu_g;
}

int impulse_size(int filter_length, int scale, int max_size) {
    if (scale < 1) throw OutOfRange("impulse scale must be >= 1");
    const int s = filter_length << scale;
    return max_size > 0 ? std::min(s, max_size) : s;
}

Imaged ImpulseResponse::magnitude() const {
    Imaged m = real.array().square();
    if (imag.size() != 0) m.array() += imag.array().square();
    return m;
}

namespace {

void check_band_scale(int band, int scale, int size) {
    if (band < 1 || band > 6) throw OutOfRange("impulse band must be in 1..6");
    if (scale < 1) throw OutOfRange("impulse scale must be >= 1");
    if (size < 1 || size % (1 << scale) != 0) {
        throw InvalidLength("impulse image size " + std::to_string(size) +
                            " is not divisible by 2^" + std::to_string(scale));
    }
}

}  // namespace

ImpulseResponse impulse_response(const DualTreeFilterSetd& fs, int band, int scale, Variant v,
                                 int size) {
    check_band_scale(band, scale, size);
    const Index n = size >> scale;
    const Index c = n / 2;
    const int b = band - 1;
    ImpulseResponse out;
    if (v == Variant::Real) {
        auto p = DualTreePyramidReal2Dd::zeros(size, size, scale);
        p.band(scale, b)(c, c) = 1.0;
        out.real = dtcwt2d_real_inverse(p, fs);
        return out;
    }
    auto p = DualTreePyramidComplex2Dd::zeros(size, size, scale);
    p.band(scale, b).real(c, c) = 1.0;
    out.real = dtcwt2d_complex_inverse(p, fs);
    p.band(scale, b).real(c, c) = 0.0;
    p.band(scale, b).imag(c, c) = 1.0;
    out.imag = dtcwt2d_complex_inverse(p, fs);
    return out;
}

double loss_gaussian_impulse(const DualTreeFilterSetd& fs, const GaussianTarget& target, int scale,
                             Variant v) {
    check_band_scale(1, scale, target.size);
    const Imaged g = target.matrix();
    double total = 0.0;
    for (int band = 1; band <= 6; ++band) {
        total += (g - impulse_response(fs, band, scale, v, target.size).magnitude()).squaredNorm();
    }
    return total;
}

namespace {

template <typename Pyr>
double detail_l1(const Pyr& p) {
    double s = 0.0;
    for (const auto& level : p.details) {
        for (const auto& tree : level) {
            for (int o = 0; o < 3; ++o) s += tree[o].cwiseAbs().sum();
        }
    }
    return s;
}

void finish(LossReport& r, const LossWeights& w) {
    r.total = r.reconstruction + w.lambda1 * r.sparsity + w.lambda2 * r.constraint +
              w.lambda3 * r.gaussian;
}

}  // namespace

LossReport total_loss(const std::vector<Imaged>& batch, const DualTreeFilterSetd& fs,
                      const LossSetup& setup) {
    if (batch.empty()) throw OutOfRange("total_loss: empty batch");
    setup.weights.validate();
    LossReport r;
    for (const auto& x : batch) {
        if (setup.variant == Variant::Real) {
            const auto p = dtcwt2d_real_forward(x, fs, setup.levels);
            r.reconstruction += (x - dtcwt2d_real_inverse(p, fs)).squaredNorm();
            r.sparsity += detail_l1(p);
        } else {
            const auto p = dtcwt2d_complex_forward(x, fs, setup.levels);
            r.reconstruction += (x - dtcwt2d_complex_inverse(p, fs)).squaredNorm();
            r.sparsity += detail_l1(p);
        }
    }
    const double m = static_cast<double>(batch.size());
    r.reconstruction /= m;
    r.sparsity /= m;
    r.constraint = loss_wavelet_constraint(fs.h1) + loss_wavelet_constraint(fs.h1_first);
    if (setup.weights.lambda3 != 0.0) {
        r.gaussian = loss_gaussian_impulse(fs, setup.target, setup.impulse_scale, setup.variant);
    }
    finish(r, setup.weights);
    return r;
}

// ---------------------------------------------------------------------------
// tape route

Var record_wavelet_constraint(Tape& t, Var h) {
    const double k = static_cast<double>(t.value(h).size());
    const Var norm_err = add_constant(t, sqrt_scalar(t, sum_squares(t, h)), -1.0);
    const Var mean_err = add_constant(t, mean(t, h), -std::sqrt(2.0) / k);
    const Var mu_g = mean(t, qmf(t, h));
    return add(t, add(t, square(t, norm_err), square(t, mean_err)), square(t, mu_g));
}

Var record_impulse_magnitude(Tape& t, const TapeFilters& f, int band, int scale, Variant v,
                             int size) {
    check_band_scale(band, scale, size);
    const Index n = size >> scale;
    Matrix unit = Matrix::Zero(n, n);
    unit(n / 2, n / 2) = 1.0;
    const int b = band - 1;
    const int o = b % 3;

    auto empty_pyramid = [&] {
        TapeDualTree p;
        p.trees.resize(tree_count(v));
        for (auto& tr : p.trees) tr.details.resize(scale);
        return p;
    };
    auto response = [&](int tree) {
        auto p = empty_pyramid();
        p.trees[tree].details[scale - 1].band[o] = t.leaf(unit, "unit");
        return record_dualtree_inverse(t, p, f, v, size, size);
    };

    if (v == Variant::Real) return square(t, response(b / 3));
    const int re = DualTreePyramidComplex2Dd::real_index(b);
    const int im = DualTreePyramidComplex2Dd::imag_index(b);
    return add(t, square(t, response(re)), square(t, response(im)));
}

Var record_gaussian_loss(Tape& t, const TapeFilters& f, const GaussianTarget& target, int scale,
                         Variant v) {
    const Var g = t.leaf(target.matrix(), "gaussian");
    Var total;
    for (int band = 1; band <= 6; ++band) {
        const Var m = record_impulse_magnitude(t, f, band, scale, v, target.size);
        total = add_optional(t, total, squared_distance(t, g, m));
    }
    return total;
}

std::pair<Var, Var> record_image_terms(Tape& t, const TapeFilters& f, const Imaged& x, Variant v,
                                       int levels) {
    const Var xv = t.leaf(x, "image");
    const auto p = record_dualtree_forward(t, xv, f, v, levels);
    const Var xhat = record_dualtree_inverse(t, p, f, v, x.rows(), x.cols());
    Var l1;
    for (const auto& tree : p.trees) {
        for (const auto& level : tree.details) {
            for (const Var b : level.band) l1 = add_optional(t, l1, abs_sum(t, b));
        }
    }
    return {squared_distance(t, xv, xhat), l1};
}

namespace {

struct ImageGradient {
    double reconstruction = 0, sparsity = 0;
    Signald d_h1, d_h1_first;
};

ImageGradient image_gradient(const Imaged& x, const DualTreeFilterSetd& fs, const LossSetup& s,
                             double batch_weight) {
    Tape t;
    const Var h1 = t.leaf(fs.h1.taps(), "h1");
    const Var h1f = t.leaf(fs.h1_first.taps(), "h1_first");
    const auto f = record_filters(t, h1, h1f);
    const auto [rec, l1] = record_image_terms(t, f, x, s.variant, s.levels);
    const Var loss = scale(t, lincomb(t, rec, 1.0, l1, s.weights.lambda1), batch_weight);
    t.backward(loss);
    return {t.value(rec)(0, 0), t.value(l1)(0, 0), t.grad(h1), t.grad(h1f)};
}

}  // namespace

LossGradient loss_and_gradient(const std::vector<Imaged>& batch, const DualTreeFilterSetd& fs,
                               const LossSetup& setup, int threads) {
    if (batch.empty()) throw OutOfRange("loss_and_gradient: empty batch");
    setup.weights.validate();
    const double w = 1.0 / static_cast<double>(batch.size());

    std::vector<ImageGradient> parts(batch.size());
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(threads, batch.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < batch.size(); ++i) parts[i] = image_gradient(batch[i], fs, setup, w);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (std::size_t wk = 0; wk < workers; ++wk) {
            pool.emplace_back([&, wk] {
                try {
                    for (std::size_t i = wk; i < batch.size(); i += workers) {
                        parts[i] = image_gradient(batch[i], fs, setup, w);
                    }
                } catch (...) {
                    errors[wk] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    LossGradient out;
    out.d_h1 = Signald::Zero(fs.h1.size());
    out.d_h1_first = Signald::Zero(fs.h1_first.size());
    for (const auto& p : parts) {
        out.report.reconstruction += p.reconstruction * w;
        out.report.sparsity += p.sparsity * w;
        out.d_h1 += p.d_h1;
        out.d_h1_first += p.d_h1_first;
    }

    // batch-independent terms on their own tape
    Tape t;
    const Var h1 = t.leaf(fs.h1.taps(), "h1");
    const Var h1f = t.leaf(fs.h1_first.taps(), "h1_first");
    const Var lw = add(t, record_wavelet_constraint(t, h1), record_wavelet_constraint(t, h1f));
    Var reg = scale(t, lw, setup.weights.lambda2);
    Var lg;
    if (setup.weights.lambda3 != 0.0) {
        const auto f = record_filters(t, h1, h1f);
        lg = record_gaussian_loss(t, f, setup.target, setup.impulse_scale, setup.variant);
        reg = lincomb(t, reg, 1.0, lg, setup.weights.lambda3);
    }
    t.backward(reg);
    out.report.constraint = t.value(lw)(0, 0);
    out.report.gaussian = lg.valid() ? t.value(lg)(0, 0) : 0.0;
    out.d_h1 += t.grad(h1);
    out.d_h1_first += t.grad(h1f);
    finish(out.report, setup.weights);
    return out;
}

}  // namespace dtcwt::learn
