#pragma once

// Shared generators and reference implementations for the test suites.

#include <cmath>
#include <random>
#include <string>

#include "dtcwt/io.hpp"
#include "dtcwt/signal_core.hpp"

namespace testing {

using namespace dtcwt;
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Signald random_signal(Rng& rng, Index n) {
    Signald x(n);
    for (auto& v : x) v = uniform(rng);
    return x;
}

inline Imaged random_image(Rng& rng, Index rows, Index cols) {
    Imaged x(rows, cols);
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = uniform(rng);
    return x;
}

inline Filterd random_filter(Rng& rng, Index k) { return Filterd(random_signal(rng, k)); }

inline Filterd fixture(const std::string& name) { return io::read_filter(io::resolve_fixture(name)); }

inline DualTreeFilterSetd fixture_set(const std::string& stem) {
    return {fixture(stem + "_h"), fixture(stem + "_hfirst")};
}

inline double rel_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const double d = b.norm();
    return d == 0 ? a.norm() : (a - b).norm() / d;
}

// Reference decimated correlation written straight from the definition:
// y[p] = sum_n f[n - 2p] a[n] over one period of n.
inline Signald naive_analysis(const Signald& a, const Filterd& f) {
    const Index n = a.size();
    Signald y = Signald::Zero(n / 2);
    for (Index p = 0; p < n / 2; ++p) {
        for (Index i = 0; i < n; ++i) {
            for (Index m = 0; m < f.size(); ++m) {
                if ((2 * p + m) % n == i) y(p) += f[m] * a(i);
            }
        }
    }
    return y;
}

// Reference synthesis as the transpose of the dense analysis matrix.
inline Eigen::MatrixXd analysis_matrix(Index n, const Filterd& f) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n / 2, n);
    for (Index p = 0; p < n / 2; ++p) {
        for (Index m = 0; m < f.size(); ++m) A(p, (2 * p + m) % n) += f[m];
    }
    return A;
}

}  // namespace testing
