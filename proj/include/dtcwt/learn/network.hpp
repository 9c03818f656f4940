#pragma once

// Dual-tree analysis and synthesis recorded on a Tape, so the loss can be
// differentiated with respect to the two learnable scaling filters.
// The recorded graphs mirror dtcwt2d_{real,complex}_{forward,inverse}.

#include <array>
#include <vector>

#include "dtcwt/dualtree.hpp"
#include "dtcwt/learn/tape.hpp"

namespace dtcwt::learn {

/// h1, h1_first plus every derived filter, recorded once per tape.
struct TapeFilters {
    Var h1, h1_first;
    std::array<Var, 2> scaling_rest, scaling_first;  // per tree
    std::array<Var, 2> wavelet_rest, wavelet_first;

    Var scaling(int tree, int level) const {
        return level <= 1 ? scaling_first[tree] : scaling_rest[tree];
    }
    Var wavelet(int tree, int level) const {
        return level <= 1 ? wavelet_first[tree] : wavelet_rest[tree];
    }
};

TapeFilters record_filters(Tape& t, Var h1, Var h1_first);

/// Bands of one level; an invalid Var stands for an all-zero band.
struct TapeBands {
    std::array<Var, 3> band;  // horizontal, vertical, diagonal
};

struct TapeTree {
    Var approx;
    std::vector<TapeBands> details;  // [level-1]
};

/// Tree-major: trees[t] with t indexing (W1, W2) or (W11, W12, W21, W22).
struct TapeDualTree {
    std::vector<TapeTree> trees;
    bool butterflied = true;
};

inline std::array<int, 2> tree_filters(Variant v, int t) {
    if (v == Variant::Real) return {t, t};
    return {t / 2, t % 2};
}

inline int tree_count(Variant v) { return v == Variant::Real ? 2 : 4; }

TapeTree record_tree_forward(Tape& t, Var x, const TapeFilters& f, int row_tree, int col_tree,
                             int levels);

/// Synthesis of one separable tree; bands may be invalid (zero). Returns an
/// invalid Var when the whole pyramid is zero.
Var record_tree_inverse(Tape& t, const TapeTree& tree, const TapeFilters& f, int row_tree,
                        int col_tree);

TapeDualTree record_dualtree_forward(Tape& t, Var x, const TapeFilters& f, Variant v, int levels);

/// Inverse butterflies, per-tree synthesis, average. `rows`/`cols` give the
/// output shape used when every band is zero.
Var record_dualtree_inverse(Tape& t, const TapeDualTree& p, const TapeFilters& f, Variant v,
                            Index rows, Index cols);

}  // namespace dtcwt::learn
