#pragma once

#include <array>
#include <vector>

#include "dtcwt/signal_core.hpp"
#include "dtcwt/wavelet1d.hpp"

namespace dtcwt {

enum class Orientation { Horizontal = 0, Vertical = 1, Diagonal = 2 };

/// The three detail components of one level:
///   horizontal = LR(HC(x)), vertical = HR(LC(x)), diagonal = HR(HC(x)).
template <typename Scalar>
struct DetailBands {
    Image<Scalar> horizontal;
    Image<Scalar> vertical;
    Image<Scalar> diagonal;

    Image<Scalar>& operator[](int o) {
        return o == 0 ? horizontal : (o == 1 ? vertical : diagonal);
    }
    const Image<Scalar>& operator[](int o) const {
        return o == 0 ? horizontal : (o == 1 ? vertical : diagonal);
    }

    static DetailBands zeros(Index rows, Index cols) {
        return {Image<Scalar>::Zero(rows, cols), Image<Scalar>::Zero(rows, cols),
                Image<Scalar>::Zero(rows, cols)};
    }
};

template <typename Scalar>
struct Pyramid2D {
    Image<Scalar> approx;
    std::vector<DetailBands<Scalar>> details;  // details[j-1] is level j

    int levels() const { return static_cast<int>(details.size()); }
    Index image_rows() const { return approx.rows() << levels(); }
    Index image_cols() const { return approx.cols() << levels(); }

    void validate() const {
        if (details.empty() || approx.size() == 0) {
            throw StructuralError("pyramid2d: needs at least one level and a non-empty approximation");
        }
        for (int j = 1; j <= levels(); ++j) {
            for (int o = 0; o < 3; ++o) {
                const auto& b = details[j - 1][o];
                if (b.rows() != (image_rows() >> j) || b.cols() != (image_cols() >> j)) {
                    throw StructuralError("pyramid2d: level " + std::to_string(j) +
                                          " band has shape " + std::to_string(b.rows()) + "x" +
                                          std::to_string(b.cols()));
                }
            }
        }
    }

    static Pyramid2D zeros(Index rows, Index cols, int levels) {
        Pyramid2D p;
        for (int j = 1; j <= levels; ++j) {
            p.details.push_back(DetailBands<Scalar>::zeros(rows >> j, cols >> j));
        }
        p.approx = Image<Scalar>::Zero(rows >> levels, cols >> levels);
        return p;
    }
};

using Pyramid2Dd = Pyramid2D<double>;

inline void require_dyadic_2d(Index rows, Index cols, int levels, const char* what) {
    require_dyadic(rows, levels, what);
    require_dyadic(cols, levels, what);
}

/// One analysis level: column filters first, then row filters.
template <typename Derived>
std::pair<Image<typename Derived::Scalar>, DetailBands<typename Derived::Scalar>> analyze_level_2d(
    const Eigen::MatrixBase<Derived>& x, const Filter<typename Derived::Scalar>& row_h,
    const Filter<typename Derived::Scalar>& col_h) {
    const auto row_g = derive_wavelet_filter(row_h);
    const auto col_g = derive_wavelet_filter(col_h);
    const auto low = analyze_along(x, col_h, Along::Columns);
    const auto high = analyze_along(x, col_g, Along::Columns);
    DetailBands<typename Derived::Scalar> d{analyze_along(high, row_h, Along::Rows),
                                            analyze_along(low, row_g, Along::Rows),
                                            analyze_along(high, row_g, Along::Rows)};
    return {analyze_along(low, row_h, Along::Rows), std::move(d)};
}

template <typename Scalar>
Image<Scalar> synthesize_level_2d(const Image<Scalar>& approx, const DetailBands<Scalar>& d,
                                  const Filter<Scalar>& row_h, const Filter<Scalar>& col_h) {
    const auto row_g = derive_wavelet_filter(row_h);
    const auto col_g = derive_wavelet_filter(col_h);
    Image<Scalar> low = Image<Scalar>::Zero(approx.rows(), 2 * approx.cols());
    Image<Scalar> high = Image<Scalar>::Zero(approx.rows(), 2 * approx.cols());
    synthesize_along_add(approx, row_h, Along::Rows, low);
    synthesize_along_add(d.vertical, row_g, Along::Rows, low);
    synthesize_along_add(d.horizontal, row_h, Along::Rows, high);
    synthesize_along_add(d.diagonal, row_g, Along::Rows, high);
    Image<Scalar> out = Image<Scalar>::Zero(2 * approx.rows(), 2 * approx.cols());
    synthesize_along_add(low, col_h, Along::Columns, out);
    synthesize_along_add(high, col_g, Along::Columns, out);
    return out;
}

/// Separable transform with distinct row and column filter schedules.
template <typename Derived>
Pyramid2D<typename Derived::Scalar> dwt2d_forward(
    const Eigen::MatrixBase<Derived>& x, const FilterSchedule<typename Derived::Scalar>& rows,
    const FilterSchedule<typename Derived::Scalar>& cols, int levels) {
    using Scalar = typename Derived::Scalar;
    require_dyadic_2d(x.rows(), x.cols(), levels, "dwt2d_forward");
    Pyramid2D<Scalar> p;
    Image<Scalar> a = x;
    for (int j = 1; j <= levels; ++j) {
        auto [next, d] = analyze_level_2d(a, rows.scaling(j), cols.scaling(j));
        p.details.push_back(std::move(d));
        a = std::move(next);
    }
    p.approx = std::move(a);
    return p;
}

template <typename Derived>
Pyramid2D<typename Derived::Scalar> dwt2d_forward(const Eigen::MatrixBase<Derived>& x,
                                                  const Filter<typename Derived::Scalar>& h,
                                                  int levels) {
    const auto s = FilterSchedule<typename Derived::Scalar>::uniform(h);
    return dwt2d_forward(x, s, s, levels);
}

template <typename Scalar>
Image<Scalar> dwt2d_inverse(const Pyramid2D<Scalar>& p, const FilterSchedule<Scalar>& rows,
                            const FilterSchedule<Scalar>& cols) {
    p.validate();
    Image<Scalar> a = p.approx;
    for (int j = p.levels(); j >= 1; --j) {
        a = synthesize_level_2d(a, p.details[j - 1], rows.scaling(j), cols.scaling(j));
    }
    return a;
}

template <typename Scalar>
Image<Scalar> dwt2d_inverse(const Pyramid2D<Scalar>& p, const Filter<Scalar>& h) {
    const auto s = FilterSchedule<Scalar>::uniform(h);
    return dwt2d_inverse(p, s, s);
}

/// Copy of `p` with everything zeroed except the three level-j detail bands.
template <typename Scalar>
Pyramid2D<Scalar> keep_single_level(const Pyramid2D<Scalar>& p, int level) {
    if (level < 1 || level > p.levels()) {
        throw OutOfRange("level " + std::to_string(level) + " outside 1.." +
                         std::to_string(p.levels()));
    }
    auto q = Pyramid2D<Scalar>::zeros(p.image_rows(), p.image_cols(), p.levels());
    q.details[level - 1] = p.details[level - 1];
    return q;
}

template <typename Scalar>
Image<Scalar> reconstruct_single_level(const Pyramid2D<Scalar>& p, const Filter<Scalar>& h,
                                       int level) {
    return dwt2d_inverse(keep_single_level(p, level), h);
}

/// Coefficient mosaic: approximation top-left, level-j details in the L-shape
/// of side H/2^j (horizontal top-right, vertical bottom-left, diagonal
/// bottom-right).
template <typename Scalar>
Image<Scalar> tile_coefficients(const Pyramid2D<Scalar>& p) {
    p.validate();
    Image<Scalar> t(p.image_rows(), p.image_cols());
    const Index ar = p.approx.rows(), ac = p.approx.cols();
    t.topLeftCorner(ar, ac) = p.approx;
    for (int j = 1; j <= p.levels(); ++j) {
        const auto& d = p.details[j - 1];
        const Index r = d.horizontal.rows(), c = d.horizontal.cols();
        t.block(0, c, r, c) = d.horizontal;
        t.block(r, 0, r, c) = d.vertical;
        t.block(r, c, r, c) = d.diagonal;
    }
    return t;
}

template <typename Derived>
Pyramid2D<typename Derived::Scalar> untile_coefficients(const Eigen::MatrixBase<Derived>& t,
                                                        int levels) {
    using Scalar = typename Derived::Scalar;
    require_dyadic_2d(t.rows(), t.cols(), levels, "untile_coefficients");
    Pyramid2D<Scalar> p;
    for (int j = 1; j <= levels; ++j) {
        const Index r = t.rows() >> j, c = t.cols() >> j;
        p.details.push_back({t.block(0, c, r, c), t.block(r, 0, r, c), t.block(r, c, r, c)});
    }
    p.approx = t.topLeftCorner(t.rows() >> levels, t.cols() >> levels);
    return p;
}

}  // namespace dtcwt
