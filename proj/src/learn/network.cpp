#include "dtcwt/learn/network.hpp"

#include <cmath>

namespace dtcwt::learn {

namespace {

void butterfly_trees(Tape& t, TapeTree& a, TapeTree& b) {
    for (std::size_t j = 0; j < a.details.size(); ++j) {
        for (int o = 0; o < 3; ++o) {
            Var& x = a.details[j].band[o];
            Var& y = b.details[j].band[o];
            if (!x.valid() && !y.valid()) continue;
            const double s = 1.0 / std::sqrt(2.0);
            if (!y.valid()) {
                y = scale(t, x, s);
                x = scale(t, x, s);
            } else if (!x.valid()) {
                x = scale(t, y, s);
                y = scale(t, y, -s);
            } else {
                auto [sum, diff] = butterfly(t, x, y);
                x = sum;
                y = diff;
            }
        }
    }
}

void apply_butterflies(Tape& t, TapeDualTree& p) {
    if (p.trees.size() == 2) {
        butterfly_trees(t, p.trees[0], p.trees[1]);
    } else {
        butterfly_trees(t, p.trees[tree_index(0, 0)], p.trees[tree_index(1, 1)]);
        butterfly_trees(t, p.trees[tree_index(0, 1)], p.trees[tree_index(1, 0)]);
    }
}

}  // namespace

TapeFilters record_filters(Tape& t, Var h1, Var h1_first) {
    TapeFilters f;
    f.h1 = h1;
    f.h1_first = h1_first;
    f.scaling_rest = {h1, reverse(t, h1)};
    f.scaling_first = {h1_first, reverse(t, h1_first)};
    for (int tree = 0; tree < 2; ++tree) {
        f.wavelet_rest[tree] = qmf(t, f.scaling_rest[tree]);
        f.wavelet_first[tree] = qmf(t, f.scaling_first[tree]);
    }
    return f;
}

TapeTree record_tree_forward(Tape& t, Var x, const TapeFilters& f, int row_tree, int col_tree,
                             int levels) {
    TapeTree out;
    Var a = x;
    for (int j = 1; j <= levels; ++j) {
        const Var low = analyze(t, a, f.scaling(col_tree, j), Along::Columns);
        const Var high = analyze(t, a, f.wavelet(col_tree, j), Along::Columns);
        TapeBands b;
        b.band[0] = analyze(t, high, f.scaling(row_tree, j), Along::Rows);
        b.band[1] = analyze(t, low, f.wavelet(row_tree, j), Along::Rows);
        b.band[2] = analyze(t, high, f.wavelet(row_tree, j), Along::Rows);
        out.details.push_back(b);
        a = analyze(t, low, f.scaling(row_tree, j), Along::Rows);
    }
    out.approx = a;
    return out;
}

Var record_tree_inverse(Tape& t, const TapeTree& tree, const TapeFilters& f, int row_tree,
                        int col_tree) {
    Var a = tree.approx;
    for (int j = static_cast<int>(tree.details.size()); j >= 1; --j) {
        const auto& d = tree.details[j - 1];
        auto synth = [&](Var c, Var filter, Along dir) {
            return c.valid() ? synthesize(t, c, filter, dir) : Var{};
        };
        const Var low = add_optional(t, synth(a, f.scaling(row_tree, j), Along::Rows),
                                     synth(d.band[1], f.wavelet(row_tree, j), Along::Rows));
        const Var high = add_optional(t, synth(d.band[0], f.scaling(row_tree, j), Along::Rows),
                                      synth(d.band[2], f.wavelet(row_tree, j), Along::Rows));
        a = add_optional(t, synth(low, f.scaling(col_tree, j), Along::Columns),
                         synth(high, f.wavelet(col_tree, j), Along::Columns));
    }
    return a;
}

TapeDualTree record_dualtree_forward(Tape& t, Var x, const TapeFilters& f, Variant v, int levels) {
    require_dyadic_2d(t.value(x).rows(), t.value(x).cols(), levels, "record_dualtree_forward");
    TapeDualTree p;
    for (int tr = 0; tr < tree_count(v); ++tr) {
        const auto [rows, cols] = tree_filters(v, tr);
        p.trees.push_back(record_tree_forward(t, x, f, rows, cols, levels));
    }
    apply_butterflies(t, p);
    return p;
}

Var record_dualtree_inverse(Tape& t, const TapeDualTree& p, const TapeFilters& f, Variant v,
                            Index rows, Index cols) {
    auto raw = p;
    if (raw.butterflied) apply_butterflies(t, raw);
    Var total;
    for (int tr = 0; tr < tree_count(v); ++tr) {
        const auto [r, c] = tree_filters(v, tr);
        total = add_optional(t, total, record_tree_inverse(t, raw.trees[tr], f, r, c));
    }
    if (!total.valid()) return t.leaf(Matrix::Zero(rows, cols), "zeros");
    return scale(t, total, 1.0 / tree_count(v));
}

}  // namespace dtcwt::learn
