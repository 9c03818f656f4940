#pragma once

// Dual-tree wavelet transforms built from q-shift filter pairs.
//
// Tree 1 uses (h1_first at level 1, h1 deeper); tree 2 uses the time reverses
// of both. The real 2D transform runs each tree separably and combines the
// matching detail bands of the two trees with the orthonormal butterfly
// (A + B)/sqrt2, (A - B)/sqrt2. The complex 2D transform runs the four
// row/column tree combinations (i, j) and butterflies (W11, W22) and
// (W12, W21). Orientation r of the first pair supplies the real parts and
// orientation r of the second pair the imaginary parts of complex bands.

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "dtcwt/signal_core.hpp"
#include "dtcwt/wavelet1d.hpp"
#include "dtcwt/wavelet2d.hpp"

namespace dtcwt {

/// (a + b)/sqrt2, (a - b)/sqrt2. Orthonormal and self-inverse.
template <typename DerivedA, typename DerivedB>
std::pair<typename DerivedA::PlainObject, typename DerivedA::PlainObject> butterfly(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    using Scalar = typename DerivedA::Scalar;
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw StructuralError("butterfly: band shapes differ");
    }
    const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
    return {s * (a + b), s * (a - b)};
}

template <typename Scalar>
void butterfly_in_place(DetailBands<Scalar>& a, DetailBands<Scalar>& b) {
    for (int o = 0; o < 3; ++o) {
        auto [sum, diff] = butterfly(a[o], b[o]);
        a[o] = std::move(sum);
        b[o] = std::move(diff);
    }
}

enum class Variant { Real, Complex };

// ---------------------------------------------------------------------------
// 1D

template <typename Scalar>
struct DualTreePyramid1D {
    std::array<Signal<Scalar>, 2> approx;
    std::vector<std::array<Signal<Scalar>, 2>> details;  // [level-1][tree]

    int levels() const { return static_cast<int>(details.size()); }

    Pyramid1D<Scalar> tree(int t) const {
        Pyramid1D<Scalar> p;
        p.approx = approx[t];
        for (const auto& d : details) p.details.push_back(d[t]);
        return p;
    }

    /// sqrt(d1^2 + d2^2) at the given level.
    Signal<Scalar> magnitude(int level) const {
        const auto& d = details.at(level - 1);
        return (d[0].array().square() + d[1].array().square()).sqrt().matrix();
    }

    static DualTreePyramid1D from_trees(const Pyramid1D<Scalar>& t0, const Pyramid1D<Scalar>& t1) {
        DualTreePyramid1D p;
        p.approx = {t0.approx, t1.approx};
        for (int j = 0; j < t0.levels(); ++j) p.details.push_back({t0.details[j], t1.details[j]});
        return p;
    }
};

using DualTreePyramid1Dd = DualTreePyramid1D<double>;

template <typename Derived>
DualTreePyramid1D<typename Derived::Scalar> dtcwt1d_forward(
    const Eigen::MatrixBase<Derived>& x, const DualTreeFilterSet<typename Derived::Scalar>& fs,
    int levels) {
    return DualTreePyramid1D<typename Derived::Scalar>::from_trees(
        dwt1d_forward(x, fs.schedule(0), levels), dwt1d_forward(x, fs.schedule(1), levels));
}

template <typename Scalar>
Signal<Scalar> dtcwt1d_inverse(const DualTreePyramid1D<Scalar>& p,
                               const DualTreeFilterSet<Scalar>& fs) {
    if (p.details.empty()) throw StructuralError("dtcwt1d_inverse: empty pyramid");
    return Scalar(0.5) * (dwt1d_inverse(p.tree(0), fs.schedule(0)) +
                          dwt1d_inverse(p.tree(1), fs.schedule(1)));
}

// ---------------------------------------------------------------------------
// 2D, shared by the real (2 trees) and complex (4 trees) variants

template <typename Scalar, int Trees>
struct DualTreePyramid2D {
    static_assert(Trees == 2 || Trees == 4);
    static constexpr int kTrees = Trees;

    std::array<Image<Scalar>, Trees> approx;                 // raw per-tree approximations
    std::vector<std::array<DetailBands<Scalar>, Trees>> details;  // [level-1][tree]
    bool butterflied = true;

    int levels() const { return static_cast<int>(details.size()); }
    Index image_rows() const { return approx[0].rows() << levels(); }
    Index image_cols() const { return approx[0].cols() << levels(); }

    Pyramid2D<Scalar> tree(int t) const {
        Pyramid2D<Scalar> p;
        p.approx = approx[t];
        for (const auto& d : details) p.details.push_back(d[t]);
        return p;
    }

    void validate() const {
        if (details.empty()) throw StructuralError("dual-tree pyramid: no levels");
        for (int t = 0; t < Trees; ++t) {
            if (approx[t].rows() != approx[0].rows() || approx[t].cols() != approx[0].cols()) {
                throw StructuralError("dual-tree pyramid: approximation shapes differ between trees");
            }
            tree(t).validate();
        }
    }

    static DualTreePyramid2D zeros(Index rows, Index cols, int levels) {
        DualTreePyramid2D p;
        for (auto& a : p.approx) a = Image<Scalar>::Zero(rows >> levels, cols >> levels);
        for (int j = 1; j <= levels; ++j) {
            std::array<DetailBands<Scalar>, Trees> level;
            for (auto& d : level) d = DetailBands<Scalar>::zeros(rows >> j, cols >> j);
            p.details.push_back(std::move(level));
        }
        return p;
    }

    DualTreePyramid2D& operator+=(const DualTreePyramid2D& o) {
        for (int t = 0; t < Trees; ++t) approx[t] += o.approx[t];
        for (std::size_t j = 0; j < details.size(); ++j) {
            for (int t = 0; t < Trees; ++t) {
                for (int b = 0; b < 3; ++b) details[j][t][b] += o.details[j][t][b];
            }
        }
        return *this;
    }
};

/// details[j][0] is the W1 group, details[j][1] the W2 group. Band b in 0..5
/// is group b/3, orientation b%3.
template <typename Scalar>
struct DualTreePyramidReal2D : DualTreePyramid2D<Scalar, 2> {
    using Base = DualTreePyramid2D<Scalar, 2>;

    Image<Scalar>& band(int level, int b) { return this->details.at(level - 1)[b / 3][b % 3]; }
    const Image<Scalar>& band(int level, int b) const {
        return this->details.at(level - 1)[b / 3][b % 3];
    }

    static DualTreePyramidReal2D zeros(Index rows, Index cols, int levels) {
        return DualTreePyramidReal2D{Base::zeros(rows, cols, levels)};
    }
};

/// Tree index for rows filtered by tree i and columns by tree j (0-based).
constexpr int tree_index(int i, int j) { return 2 * i + j; }

template <typename Scalar>
struct ComplexBandRef {
    Image<Scalar>& real;
    Image<Scalar>& imag;
};

/// Four trees in order (1,1), (1,2), (2,1), (2,2) as (rows, columns).
/// After the butterflies the W11/W22 slots hold the sum/difference of that
/// pair and the W12/W21 slots the sum/difference of the other. Complex band b
/// in 0..5 has orientation b%3; b<3 takes real from W11 and imag from W21,
/// b>=3 real from W22 and imag from W12. Pairing a sum with a difference
/// makes each band analytic: its spectrum sits in one half plane.
template <typename Scalar>
struct DualTreePyramidComplex2D : DualTreePyramid2D<Scalar, 4> {
    using Base = DualTreePyramid2D<Scalar, 4>;

    static int real_index(int b) { return b < 3 ? tree_index(0, 0) : tree_index(1, 1); }
    static int imag_index(int b) { return b < 3 ? tree_index(1, 0) : tree_index(0, 1); }

    ComplexBandRef<Scalar> band(int level, int b) {
        auto& d = this->details.at(level - 1);
        return {d[real_index(b)][b % 3], d[imag_index(b)][b % 3]};
    }
    const Image<Scalar>& band_real(int level, int b) const {
        return this->details.at(level - 1)[real_index(b)][b % 3];
    }
    const Image<Scalar>& band_imag(int level, int b) const {
        return this->details.at(level - 1)[imag_index(b)][b % 3];
    }
    Image<Scalar> magnitude(int level, int b) const {
        return (band_real(level, b).array().square() + band_imag(level, b).array().square())
            .sqrt()
            .matrix();
    }

    static DualTreePyramidComplex2D zeros(Index rows, Index cols, int levels) {
        return DualTreePyramidComplex2D{Base::zeros(rows, cols, levels)};
    }
};

using DualTreePyramidReal2Dd = DualTreePyramidReal2D<double>;
using DualTreePyramidComplex2Dd = DualTreePyramidComplex2D<double>;

namespace detail {

template <typename Pyr>
void apply_butterflies(Pyr& p) {
    for (auto& level : p.details) {
        if constexpr (Pyr::kTrees == 2) {
            butterfly_in_place(level[0], level[1]);
        } else {
            butterfly_in_place(level[tree_index(0, 0)], level[tree_index(1, 1)]);
            butterfly_in_place(level[tree_index(0, 1)], level[tree_index(1, 0)]);
        }
    }
}

template <typename Pyr, typename Scalar>
void fill_tree(Pyr& out, int t, const Pyramid2D<Scalar>& tree) {
    out.approx[t] = tree.approx;
    if (out.details.size() < tree.details.size()) out.details.resize(tree.details.size());
    for (std::size_t j = 0; j < tree.details.size(); ++j) out.details[j][t] = tree.details[j];
}

}  // namespace detail

enum class Butterfly { Apply, Skip };

template <typename Derived>
DualTreePyramidReal2D<typename Derived::Scalar> dtcwt2d_real_forward(
    const Eigen::MatrixBase<Derived>& x, const DualTreeFilterSet<typename Derived::Scalar>& fs,
    int levels, Butterfly mode = Butterfly::Apply) {
    require_dyadic_2d(x.rows(), x.cols(), levels, "dtcwt2d_real_forward");
    DualTreePyramidReal2D<typename Derived::Scalar> p;
    for (int t = 0; t < 2; ++t) {
        const auto s = fs.schedule(t);
        detail::fill_tree(p, t, dwt2d_forward(x, s, s, levels));
    }
    p.butterflied = mode == Butterfly::Apply;
    if (p.butterflied) detail::apply_butterflies(p);
    return p;
}

template <typename Derived>
DualTreePyramidComplex2D<typename Derived::Scalar> dtcwt2d_complex_forward(
    const Eigen::MatrixBase<Derived>& x, const DualTreeFilterSet<typename Derived::Scalar>& fs,
    int levels, Butterfly mode = Butterfly::Apply) {
    require_dyadic_2d(x.rows(), x.cols(), levels, "dtcwt2d_complex_forward");
    DualTreePyramidComplex2D<typename Derived::Scalar> p;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            detail::fill_tree(p, tree_index(i, j),
                              dwt2d_forward(x, fs.schedule(i), fs.schedule(j), levels));
        }
    }
    p.butterflied = mode == Butterfly::Apply;
    if (p.butterflied) detail::apply_butterflies(p);
    return p;
}

/// Undo the butterflies, invert every tree independently and average.
template <typename Scalar>
Image<Scalar> dtcwt2d_real_inverse(const DualTreePyramidReal2D<Scalar>& p,
                                   const DualTreeFilterSet<Scalar>& fs) {
    p.validate();
    auto raw = p;
    if (raw.butterflied) detail::apply_butterflies(raw);
    Image<Scalar> out = Image<Scalar>::Zero(p.image_rows(), p.image_cols());
    for (int t = 0; t < 2; ++t) {
        const auto s = fs.schedule(t);
        out += dwt2d_inverse(raw.tree(t), s, s);
    }
    return out / Scalar(2);
}

template <typename Scalar>
Image<Scalar> dtcwt2d_complex_inverse(const DualTreePyramidComplex2D<Scalar>& p,
                                      const DualTreeFilterSet<Scalar>& fs) {
    p.validate();
    auto raw = p;
    if (raw.butterflied) detail::apply_butterflies(raw);
    Image<Scalar> out = Image<Scalar>::Zero(p.image_rows(), p.image_cols());
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out += dwt2d_inverse(raw.tree(tree_index(i, j)), fs.schedule(i), fs.schedule(j));
        }
    }
    return out / Scalar(4);
}

/// Zero every band except the level-j details of all trees.
template <typename Pyr>
Pyr keep_single_level(const Pyr& p, int level) {
    if (level < 1 || level > p.levels()) {
        throw OutOfRange("level " + std::to_string(level) + " outside 1.." +
                         std::to_string(p.levels()));
    }
    Pyr q = Pyr::zeros(p.image_rows(), p.image_cols(), p.levels());
    q.butterflied = p.butterflied;
    q.details[level - 1] = p.details[level - 1];
    return q;
}

}  // namespace dtcwt
