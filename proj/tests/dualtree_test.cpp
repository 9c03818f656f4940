#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "support.hpp"
#include "dtcwt/diagnostics.hpp"
#include "dtcwt/dualtree.hpp"
#include "dtcwt/learn/loss.hpp"

using namespace testing;

namespace {

double max_abs(const Imaged& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

double tree_diff(const Pyramid2Dd& a, const Pyramid2Dd& b) {
    double d = max_abs(a.approx - b.approx);
    for (int j = 0; j < a.levels(); ++j) {
        for (int o = 0; o < 3; ++o) d = std::max(d, max_abs(a.details[j][o] - b.details[j][o]));
    }
    return d;
}

using Cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

CMatrix dft_matrix(Index n) {
    CMatrix f(n, n);
    for (Index a = 0; a < n; ++a) {
        for (Index b = 0; b < n; ++b) {
            f(a, b) = std::polar(1.0, -2.0 * std::numbers::pi * double(a * b % n) / double(n));
        }
    }
    return f;
}

Index signed_freq(Index k, Index n) { return k <= n / 2 ? k : k - n; }

struct Spectrum {
    double best_half_plane;  // largest energy fraction in any half plane through the origin
    double peak_angle;       // direction of the strongest bin, radians in [0, pi)
};

Spectrum spectrum_of(const Imaged& re, const Imaged& im) {
    const Index n = re.rows();
    const CMatrix f = dft_matrix(n);
    const CMatrix z = re.cast<Cplx>() + Cplx(0, 1) * im.cast<Cplx>();
    const Eigen::MatrixXd power = (f * z * f.transpose()).cwiseAbs2();
    const double total = power.sum();

    Spectrum s{0, 0};
    for (int step = 0; step < 360; ++step) {
        const double t = step * std::numbers::pi / 180.0;
        double e = 0;
        for (Index r = 0; r < n; ++r) {
            for (Index c = 0; c < n; ++c) {
                if (signed_freq(c, n) * std::cos(t) + signed_freq(r, n) * std::sin(t) > 0) {
                    e += power(r, c);
                }
            }
        }
        s.best_half_plane = std::max(s.best_half_plane, e / total);
    }
    Index pr = 0, pc = 0;
    power.maxCoeff(&pr, &pc);
    double a = std::atan2(double(signed_freq(pr, n)), double(signed_freq(pc, n)));
    if (a < 0) a += std::numbers::pi;
    if (a >= std::numbers::pi) a -= std::numbers::pi;
    s.peak_angle = a;
    return s;
}

// Orthogonal filters for both levels, so every tree inverts exactly.
DualTreeFilterSetd orthogonal_set() {
    return {fixture("kingsbury_qshift_10"), fixture("kingsbury_qshift_06")};
}

template <typename Pyr>
double pyramid_dot(const Pyr& a, const Pyr& b) {
    double s = 0;
    for (int t = 0; t < Pyr::kTrees; ++t) s += a.approx[t].cwiseProduct(b.approx[t]).sum();
    for (std::size_t j = 0; j < a.details.size(); ++j) {
        for (int t = 0; t < Pyr::kTrees; ++t) {
            for (int o = 0; o < 3; ++o) s += a.details[j][t][o].cwiseProduct(b.details[j][t][o]).sum();
        }
    }
    return s;
}

Signald roll(const Signald& x, Index s) {
    const Index n = x.size();
    Signald y(n);
    for (Index i = 0; i < n; ++i) y((i + s) % n) = x(i);
    return y;
}

}  // namespace

TEST_CASE("butterfly arithmetic") {
    Imaged a(1, 1), b(1, 1);
    a << 2;
    b << 0;
    auto [s, d] = butterfly(a, b);
    CHECK(s(0, 0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(d(0, 0) == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(butterfly(Imaged::Zero(2, 2), Imaged::Zero(2, 3)), StructuralError);
}

TEST_CASE("property: butterfly is an energy-preserving involution") {
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const Imaged a = random_image(rng, 8, 4), b = random_image(rng, 8, 4);
        auto [s, d] = butterfly(a, b);
        auto [a2, b2] = butterfly(s, d);
        CHECK(max_abs(a2 - a) < 1e-12);
        CHECK(max_abs(b2 - b) < 1e-12);
        const double e0 = a.squaredNorm() + b.squaredNorm();
        CHECK(std::abs(s.squaredNorm() + d.squaredNorm() - e0) < 1e-12 * e0);
    }
}

TEST_CASE("1D dual tree") {
    const auto fs = fixture_set("learned_complex");
    Rng rng(42);
    SUBCASE("constant signal has zero magnitude") {
        const DualTreeFilterSetd exact{fixture("db2"), fixture("db2")};
        const auto r = dtcwt1d_forward(Signald::Constant(64, 1.5), exact, 3);
        for (int j = 1; j <= 3; ++j) CHECK(r.magnitude(j).maxCoeff() < 1e-13);
    }
    SUBCASE("each tree is an ordinary DWT with its own filters") {
        const Signald x = random_signal(rng, 64);
        const auto p = dtcwt1d_forward(x, fs, 3);
        for (int t = 0; t < 2; ++t) {
            const auto want = dwt1d_forward(x, fs.schedule(t), 3);
            const auto got = p.tree(t);
            CHECK((got.approx - want.approx).cwiseAbs().maxCoeff() == 0.0);
            for (int j = 0; j < 3; ++j) {
                CHECK((got.details[j] - want.details[j]).cwiseAbs().maxCoeff() == 0.0);
            }
        }
    }
    SUBCASE("round trip and zero pyramid") {
        const Signald x = random_signal(rng, 64);
        const auto ortho = orthogonal_set();
        CHECK(rel_error(dtcwt1d_inverse(dtcwt1d_forward(x, ortho, 3), ortho), x) < 1e-10);
        MESSAGE("learned_complex 1D round-trip relative error "
                << rel_error(dtcwt1d_inverse(dtcwt1d_forward(x, fs, 3), fs), x));
        auto z = dtcwt1d_forward(Signald::Zero(64), fs, 3);
        CHECK(dtcwt1d_inverse(z, fs).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("property: level-3 magnitudes move less than DWT coefficients under 1-sample shifts") {
    Rng rng(43);
    const auto fs = fixture_set("learned_complex");
    const Filterd h = fs.h1;
    double dwt_change = 0, dtcwt_change = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Signald x = Signald::Zero(256);
        for (int k = 0; k < 3; ++k) {
            const double f = uniform(rng, 1.0, 12.0), ph = uniform(rng, 0.0, 2 * std::numbers::pi);
            for (Index i = 0; i < 256; ++i) {
                x(i) += std::sin(2 * std::numbers::pi * f * double(i) / 256.0 + ph);
            }
        }
        const Signald y = roll(x, 1);
        const Signald dx = dwt1d_forward(x, h, 3).details[2], dy = dwt1d_forward(y, h, 3).details[2];
        const Signald mx = dtcwt1d_forward(x, fs, 3).magnitude(3);
        const Signald my = dtcwt1d_forward(y, fs, 3).magnitude(3);
        dwt_change += (dy - dx).norm() / dx.norm();
        dtcwt_change += (my - mx).norm() / mx.norm();
    }
    MESSAGE("mean relative change: dwt " << dwt_change / 100 << ", dtcwt " << dtcwt_change / 100);
    CHECK(dtcwt_change < dwt_change);
}

TEST_CASE("real 2D dual tree") {
    const auto fs = fixture_set("learned_real");
    Rng rng(44);
    const Imaged x = random_image(rng, 64, 64);
    SUBCASE("pre-butterfly trees are separable transforms") {
        const auto p = dtcwt2d_real_forward(x, fs, 3, Butterfly::Skip);
        for (int t = 0; t < 2; ++t) {
            const auto s = fs.schedule(t);
            CHECK(tree_diff(p.tree(t), dwt2d_forward(x, s, s, 3)) == 0.0);
        }
    }
    SUBCASE("identical trees leave the W2 group empty") {
        const DualTreeFilterSetd same{Filterd::haar(), Filterd::haar()};
        const auto p = dtcwt2d_real_forward(x, same, 3);
        for (int j = 1; j <= 3; ++j) {
            for (int b = 3; b < 6; ++b) CHECK(max_abs(p.band(j, b)) == 0.0);
        }
    }
    SUBCASE("round trip, zero pyramid, linearity") {
        const auto ortho = orthogonal_set();
        CHECK(rel_error(dtcwt2d_real_inverse(dtcwt2d_real_forward(x, ortho, 3), ortho), x) < 1e-10);
        CHECK(max_abs(dtcwt2d_real_inverse(DualTreePyramidReal2Dd::zeros(64, 64, 3), fs)) == 0.0);
        const Imaged y = random_image(rng, 64, 64);
        auto p = dtcwt2d_real_forward(x, fs, 3);
        auto q = dtcwt2d_real_forward(y, fs, 3);
        const Imaged sum_of = dtcwt2d_real_inverse(p, fs) + dtcwt2d_real_inverse(q, fs);
        p += q;
        CHECK(max_abs(dtcwt2d_real_inverse(p, fs) - sum_of) < 1e-10);
    }
    SUBCASE("agrees with the complex inverse on matched trees") {
        const auto real = dtcwt2d_real_forward(x, fs, 3, Butterfly::Skip);
        auto cx = dtcwt2d_complex_forward(x, fs, 3, Butterfly::Skip);
        for (int t : {tree_index(0, 1), tree_index(1, 0)}) {
            cx.approx[t].setZero();
            for (auto& level : cx.details) {
                for (int o = 0; o < 3; ++o) level[t][o].setZero();
            }
        }
        CHECK(tree_diff(cx.tree(tree_index(0, 0)), real.tree(0)) == 0.0);
        CHECK(tree_diff(cx.tree(tree_index(1, 1)), real.tree(1)) == 0.0);
        const Imaged a = dtcwt2d_complex_inverse(cx, fs);
        const Imaged b = dtcwt2d_real_inverse(real, fs);
        CHECK(max_abs(2.0 * a - b) < 1e-12);
    }
    SUBCASE("inverse is the scaled adjoint for the learned filters") {
        for (int trial = 0; trial < 5; ++trial) {
            const Imaged y = random_image(rng, 64, 64);
            const auto p = dtcwt2d_real_forward(y, fs, 3);
            const auto q = dtcwt2d_real_forward(random_image(rng, 64, 64), orthogonal_set(), 3);
            const double lhs = pyramid_dot(p, q);
            const double rhs = 2.0 * y.cwiseProduct(dtcwt2d_real_inverse(q, fs)).sum();
            CHECK(std::abs(lhs - rhs) < 1e-10 * (1 + std::abs(lhs)));
        }
    }
    SUBCASE("indivisible image") {
        CHECK_THROWS_AS(dtcwt2d_real_forward(Imaged::Zero(24, 24), fs, 4), InvalidLength);
    }
}

TEST_CASE("complex 2D dual tree") {
    const auto fs = fixture_set("learned_complex");
    Rng rng(45);
    const Imaged x = random_image(rng, 64, 64);
    SUBCASE("constant image has twelve empty detail matrices per level") {
        const DualTreeFilterSetd exact{fixture("db2"), fixture("db2")};
        const auto p = dtcwt2d_complex_forward(Imaged::Constant(32, 32, 2.0), exact, 3);
        for (const auto& level : p.details) {
            for (int t = 0; t < 4; ++t) {
                for (int o = 0; o < 3; ++o) CHECK(max_abs(level[t][o]) < 1e-12);
            }
        }
    }
    SUBCASE("every tree combination is a separable transform") {
        const auto p = dtcwt2d_complex_forward(x, fs, 3, Butterfly::Skip);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const auto want = dwt2d_forward(x, fs.schedule(i), fs.schedule(j), 3);
                CHECK(tree_diff(p.tree(tree_index(i, j)), want) == 0.0);
            }
        }
    }
    SUBCASE("butterflies are self-inverse") {
        const auto raw = dtcwt2d_complex_forward(x, fs, 3, Butterfly::Skip);
        auto twice = raw;
        detail::apply_butterflies(twice);
        detail::apply_butterflies(twice);
        for (int t = 0; t < 4; ++t) CHECK(tree_diff(twice.tree(t), raw.tree(t)) < 1e-12);
    }
    SUBCASE("round trip, zero pyramid, linearity") {
        const auto ortho = orthogonal_set();
        CHECK(rel_error(dtcwt2d_complex_inverse(dtcwt2d_complex_forward(x, ortho, 3), ortho), x) <
              1e-10);
        CHECK(max_abs(dtcwt2d_complex_inverse(DualTreePyramidComplex2Dd::zeros(64, 64, 3), fs)) ==
              0.0);
        const Imaged y = random_image(rng, 64, 64);
        auto p = dtcwt2d_complex_forward(x, fs, 3);
        auto q = dtcwt2d_complex_forward(y, fs, 3);
        const Imaged sum_of = dtcwt2d_complex_inverse(p, fs) + dtcwt2d_complex_inverse(q, fs);
        p += q;
        CHECK(max_abs(dtcwt2d_complex_inverse(p, fs) - sum_of) < 1e-10);
    }
    SUBCASE("inverse is the scaled adjoint for the learned filters") {
        for (int trial = 0; trial < 5; ++trial) {
            const Imaged y = random_image(rng, 64, 64);
            const auto p = dtcwt2d_complex_forward(y, fs, 3);
            const auto q = dtcwt2d_complex_forward(random_image(rng, 64, 64), orthogonal_set(), 3);
            const double lhs = pyramid_dot(p, q);
            const double rhs = 4.0 * y.cwiseProduct(dtcwt2d_complex_inverse(q, fs)).sum();
            CHECK(std::abs(lhs - rhs) < 1e-10 * (1 + std::abs(lhs)));
        }
    }
    SUBCASE("structural mismatch") {
        auto p = DualTreePyramidComplex2Dd::zeros(32, 32, 2);
        p.details[1][2].vertical = Imaged::Zero(3, 3);
        CHECK_THROWS_AS(dtcwt2d_complex_inverse(p, fs), StructuralError);
    }
}

TEST_CASE("complex bands are analytic and point in six directions") {
    for (const std::string name : {"learned_complex", "learned_complex18"}) {
        CAPTURE(name);
        const auto fs = fixture_set(name);
        std::vector<double> angles;
        for (int b = 1; b <= 6; ++b) {
            const auto r = learn::impulse_response(fs, b, 3, Variant::Complex, 64);
            const Spectrum s = spectrum_of(r.real, r.imag);
            CAPTURE(b);
            CHECK(s.best_half_plane > 0.9);
            angles.push_back(s.peak_angle);
        }
        CHECK(count_distinct_angles(angles, 20.0 * std::numbers::pi / 180.0) == 6);
    }
}
