#pragma once

// Sequences, images, filters and the periodic multirate kernels every
// transform in the library is built from.
//
// Conventions:
//   * filters are 0-based over 0..k-1; time reversal maps n -> k-1-n
//   * boundaries are periodic, all indices are taken modulo the length
//   * analysis keeps the even phase: out[p] = sum_m f[m] * a[(2p + m) mod N]
//   * synthesis is the exact adjoint:  out[(2p + m) mod N] += f[m] * c[p]

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <utility>

#include "dtcwt/errors.hpp"

namespace dtcwt {

using Index = Eigen::Index;

template <typename Scalar>
using Signal = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Image = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Signald = Signal<double>;
using Imaged = Image<double>;

/// Direction a 1D filter runs over an image.
///  Columns: down each column (the LC/HC operators), halves the row count.
///  Rows:    along each row (the LR/HR operators), halves the column count.
/// A Signal is an N x 1 image filtered along Columns.
enum class Along { Columns, Rows };

template <typename Scalar>
class Filter {
public:
    using Taps = Signal<Scalar>;

    explicit Filter(Taps taps) : taps_(std::move(taps)) {
        if (taps_.size() < 2 || taps_.size() % 2 != 0) {
            throw InvalidFilter("filter length must be even and >= 2, got " +
                                std::to_string(taps_.size()));
        }
    }

    Filter(std::initializer_list<Scalar> taps)
        : Filter(Taps(Eigen::Map<const Taps>(taps.begin(), Index(taps.size())))) {}

    static Filter haar() {
        const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
        return Filter{s, s};
    }

    Index size() const { return taps_.size(); }
    const Taps& taps() const { return taps_; }
    Scalar operator[](Index n) const { return taps_[n]; }

    friend bool operator==(const Filter& a, const Filter& b) {
        return a.taps_.size() == b.taps_.size() && a.taps_ == b.taps_;
    }

private:
    Taps taps_;
};

using Filterd = Filter<double>;

/// g[n] = (-1)^n h[k-1-n]
template <typename Scalar>
Filter<Scalar> derive_wavelet_filter(const Filter<Scalar>& h) {
    const Index k = h.size();
    Signal<Scalar> g(k);
    for (Index n = 0; n < k; ++n) {
        g[n] = (n % 2 == 0 ? h[k - 1 - n] : -h[k - 1 - n]);
    }
    return Filter<Scalar>(std::move(g));
}

/// h2[n] = h1[k-1-n]
template <typename Scalar>
Filter<Scalar> derive_qshift_partner(const Filter<Scalar>& h) {
    return Filter<Scalar>(h.taps().reverse().eval());
}

/// Scaling/wavelet filters selected per decomposition level: `first` at
/// level 1, `rest` at every deeper level.
template <typename Scalar>
struct FilterSchedule {
    Filter<Scalar> first;
    Filter<Scalar> rest;

    static FilterSchedule uniform(const Filter<Scalar>& h) { return {h, h}; }

    const Filter<Scalar>& scaling(int level) const { return level <= 1 ? first : rest; }
    Filter<Scalar> wavelet(int level) const { return derive_wavelet_filter(scaling(level)); }
};

/// Learnable dual-tree parameters: the tree-1 scaling filter for levels >= 2
/// and the tree-1 scaling filter for level 1. Every other filter is derived.
template <typename Scalar>
struct DualTreeFilterSet {
    Filter<Scalar> h1;
    Filter<Scalar> h1_first;

    Filter<Scalar> g1() const { return derive_wavelet_filter(h1); }
    Filter<Scalar> h2() const { return derive_qshift_partner(h1); }
    Filter<Scalar> g2() const { return derive_wavelet_filter(h2()); }
    Filter<Scalar> g1_first() const { return derive_wavelet_filter(h1_first); }
    Filter<Scalar> h2_first() const { return derive_qshift_partner(h1_first); }
    Filter<Scalar> g2_first() const { return derive_wavelet_filter(h2_first()); }

    /// tree is 0 or 1.
    FilterSchedule<Scalar> schedule(int tree) const {
        if (tree == 0) return {h1_first, h1};
        return {h2_first(), h2()};
    }
};

using DualTreeFilterSetd = DualTreeFilterSet<double>;

namespace detail {

inline Index wrap(Index i, Index n) { return i >= 0 && i < n ? i : ((i % n) + n) % n; }

inline void require_even(Index n, const char* what) {
    if (n < 2 || n % 2 != 0) {
        throw InvalidLength(std::string(what) + ": length must be even and >= 2, got " +
                            std::to_string(n));
    }
}

}  // namespace detail

/// Decimated periodic correlation of every column (or row) of `x` with `f`.
/// Filters longer than the input wrap around the period.
template <typename Derived>
Image<typename Derived::Scalar> analyze_along(const Eigen::MatrixBase<Derived>& x,
                                              const Filter<typename Derived::Scalar>& f,
                                              Along dir) {
    using Scalar = typename Derived::Scalar;
    const Index k = f.size();
    if (dir == Along::Columns) {
        const Index n = x.rows();
        detail::require_even(n, "analyze_along(columns)");
        Image<Scalar> out = Image<Scalar>::Zero(n / 2, x.cols());
        for (Index c = 0; c < x.cols(); ++c) {
            for (Index p = 0; p < n / 2; ++p) {
                Scalar acc(0);
                for (Index m = 0; m < k; ++m) acc += f[m] * x(detail::wrap(2 * p + m, n), c);
                out(p, c) = acc;
            }
        }
        return out;
    }
    const Index n = x.cols();
    detail::require_even(n, "analyze_along(rows)");
    Image<Scalar> out = Image<Scalar>::Zero(x.rows(), n / 2);
    for (Index p = 0; p < n / 2; ++p) {
        for (Index m = 0; m < k; ++m) out.col(p) += f[m] * x.col(detail::wrap(2 * p + m, n));
    }
    return out;
}

/// acc += zero-upsampled `c` convolved with `f`, along the given direction.
/// Adjoint of analyze_along.
template <typename Derived, typename AccDerived>
void synthesize_along_add(const Eigen::MatrixBase<Derived>& c,
                          const Filter<typename Derived::Scalar>& f, Along dir,
                          Eigen::MatrixBase<AccDerived>& acc) {
    const Index k = f.size();
    if (dir == Along::Columns) {
        const Index n = acc.rows();
        if (n != 2 * c.rows() || acc.cols() != c.cols()) {
            throw InvalidLength("synthesize_along_add(columns): accumulator must be twice the "
                                "coefficient length");
        }
        for (Index col = 0; col < c.cols(); ++col) {
            for (Index p = 0; p < c.rows(); ++p) {
                const auto v = c(p, col);
                for (Index m = 0; m < k; ++m) acc(detail::wrap(2 * p + m, n), col) += f[m] * v;
            }
        }
        return;
    }
    const Index n = acc.cols();
    if (n != 2 * c.cols() || acc.rows() != c.rows()) {
        throw InvalidLength("synthesize_along_add(rows): accumulator must be twice the "
                            "coefficient length");
    }
    for (Index p = 0; p < c.cols(); ++p) {
        for (Index m = 0; m < k; ++m) acc.col(detail::wrap(2 * p + m, n)) += f[m] * c.col(p);
    }
}

template <typename Derived>
Image<typename Derived::Scalar> synthesize_along(const Eigen::MatrixBase<Derived>& c,
                                                 const Filter<typename Derived::Scalar>& f,
                                                 Along dir) {
    using Scalar = typename Derived::Scalar;
    Image<Scalar> out = dir == Along::Columns ? Image<Scalar>::Zero(2 * c.rows(), c.cols())
                                              : Image<Scalar>::Zero(c.rows(), 2 * c.cols());
    synthesize_along_add(c, f, dir, out);
    return out;
}

/// out[p] = sum_n f[n - 2p] a[n], indices modulo len(a). Output length len(a)/2.
template <typename Derived>
Signal<typename Derived::Scalar> circular_convolve_decimate(
    const Eigen::MatrixBase<Derived>& a, const Filter<typename Derived::Scalar>& f) {
    static_assert(Derived::ColsAtCompileTime == 1, "expects a column vector");
    return analyze_along(a, f, Along::Columns);
}

/// acc + (zero-upsampled c) * f with periodic wrap; one summand of the
/// reconstruction recursion.
template <typename Derived, typename AccDerived>
Signal<typename Derived::Scalar> upsample_convolve_accumulate(
    const Eigen::MatrixBase<Derived>& c, const Filter<typename Derived::Scalar>& f,
    const Eigen::MatrixBase<AccDerived>& acc) {
    static_assert(Derived::ColsAtCompileTime == 1, "expects a column vector");
    Signal<typename Derived::Scalar> out = acc;
    synthesize_along_add(c, f, Along::Columns, out);
    return out;
}

/// Maps every value to the nearest of `levels` evenly spaced points spanning
/// [min(x), max(x)]. Constant input comes back unchanged.
template <typename Derived>
typename Derived::PlainObject quantize_uniform(const Eigen::MatrixBase<Derived>& x, int levels) {
    using Scalar = typename Derived::Scalar;
    if (levels < 2) throw OutOfRange("quantize_uniform: levels must be >= 2");
    typename Derived::PlainObject out = x;
    if (x.size() == 0) return out;
    const Scalar lo = x.minCoeff();
    const Scalar hi = x.maxCoeff();
    if (!(hi > lo)) return out;
    const Scalar step = (hi - lo) / Scalar(levels - 1);
    for (Index i = 0; i < out.size(); ++i) {
        const Scalar idx = std::clamp(std::round((out.data()[i] - lo) / step), Scalar(0),
                                      Scalar(levels - 1));
        out.data()[i] = std::lerp(lo, hi, idx / Scalar(levels - 1));
    }
    return out;
}

}  // namespace dtcwt
