#pragma once

#include <vector>

#include "dtcwt/signal_core.hpp"

namespace dtcwt {

/// Decimated 1D coefficient hierarchy: details[j-1] holds d_j (length N/2^j),
/// approx holds a_J.
template <typename Scalar>
struct Pyramid1D {
    Signal<Scalar> approx;
    std::vector<Signal<Scalar>> details;

    int levels() const { return static_cast<int>(details.size()); }
    Index signal_length() const { return approx.size() << levels(); }

    /// Throws StructuralError unless every band has its dyadic length.
    void validate() const {
        if (details.empty() || approx.size() == 0) {
            throw StructuralError("pyramid1d: needs at least one level and a non-empty approximation");
        }
        const Index n = signal_length();
        for (int j = 1; j <= levels(); ++j) {
            if (details[j - 1].size() != (n >> j)) {
                throw StructuralError("pyramid1d: detail band " + std::to_string(j) +
                                      " has length " + std::to_string(details[j - 1].size()) +
                                      ", expected " + std::to_string(n >> j));
            }
        }
    }

    static Pyramid1D zeros(Index n, int levels) {
        Pyramid1D p;
        for (int j = 1; j <= levels; ++j) p.details.push_back(Signal<Scalar>::Zero(n >> j));
        p.approx = Signal<Scalar>::Zero(n >> levels);
        return p;
    }
};

using Pyramid1Dd = Pyramid1D<double>;

inline void require_dyadic(Index n, int levels, const char* what) {
    if (levels < 1) throw OutOfRange(std::string(what) + ": levels must be >= 1");
    if (n < 1 || levels >= 62 || n % (Index(1) << levels) != 0) {
        throw InvalidLength(std::string(what) + ": length " + std::to_string(n) +
                            " is not divisible by 2^" + std::to_string(levels));
    }
}

template <typename Derived>
Pyramid1D<typename Derived::Scalar> dwt1d_forward(
    const Eigen::MatrixBase<Derived>& x, const FilterSchedule<typename Derived::Scalar>& filters,
    int levels) {
    using Scalar = typename Derived::Scalar;
    require_dyadic(x.size(), levels, "dwt1d_forward");
    Pyramid1D<Scalar> p;
    Signal<Scalar> a = x;
    for (int j = 1; j <= levels; ++j) {
        const auto& h = filters.scaling(j);
        p.details.push_back(circular_convolve_decimate(a, derive_wavelet_filter(h)));
        a = circular_convolve_decimate(a, h);
    }
    p.approx = std::move(a);
    return p;
}

template <typename Derived>
Pyramid1D<typename Derived::Scalar> dwt1d_forward(const Eigen::MatrixBase<Derived>& x,
                                                  const Filter<typename Derived::Scalar>& h,
                                                  int levels) {
    return dwt1d_forward(x, FilterSchedule<typename Derived::Scalar>::uniform(h), levels);
}

template <typename Scalar>
Signal<Scalar> dwt1d_inverse(const Pyramid1D<Scalar>& p, const FilterSchedule<Scalar>& filters) {
    p.validate();
    Signal<Scalar> a = p.approx;
    for (int j = p.levels(); j >= 1; --j) {
        const auto& h = filters.scaling(j);
        Signal<Scalar> next = Signal<Scalar>::Zero(2 * a.size());
        synthesize_along_add(a, h, Along::Columns, next);
        synthesize_along_add(p.details[j - 1], derive_wavelet_filter(h), Along::Columns, next);
        a = std::move(next);
    }
    return a;
}

template <typename Scalar>
Signal<Scalar> dwt1d_inverse(const Pyramid1D<Scalar>& p, const Filter<Scalar>& h) {
    return dwt1d_inverse(p, FilterSchedule<Scalar>::uniform(h));
}

/// Full-length level-j detail sequence (a trous: filters dilated by 2^(l-1) at
/// level l, no decimation). Sampling it at stride 2^j, phase 0, gives d_j.
template <typename Derived>
Signal<typename Derived::Scalar> undecimated_detail(
    const Eigen::MatrixBase<Derived>& x, const FilterSchedule<typename Derived::Scalar>& filters,
    int level) {
    using Scalar = typename Derived::Scalar;
    if (level < 1) throw OutOfRange("undecimated_detail: level must be >= 1");
    const Index n = x.size();
    if (n < 1) throw InvalidLength("undecimated_detail: empty signal");

    auto dilated = [n](const Signal<Scalar>& a, const Filter<Scalar>& f, Index stride) {
        Signal<Scalar> out = Signal<Scalar>::Zero(n);
        for (Index i = 0; i < n; ++i) {
            Scalar acc(0);
            for (Index m = 0; m < f.size(); ++m) acc += f[m] * a[(i + stride * m) % n];
            out[i] = acc;
        }
        return out;
    };

    Signal<Scalar> a = x;
    Index stride = 1;
    for (int l = 1; l < level; ++l, stride *= 2) a = dilated(a, filters.scaling(l), stride);
    return dilated(a, filters.wavelet(level), stride);
}

template <typename Derived>
Signal<typename Derived::Scalar> undecimated_detail(const Eigen::MatrixBase<Derived>& x,
                                                   const Filter<typename Derived::Scalar>& h,
                                                   int level) {
    return undecimated_detail(x, FilterSchedule<typename Derived::Scalar>::uniform(h), level);
}

}  // namespace dtcwt
