#pragma once

// Minimal reverse-mode differentiation over whole-matrix primitives.
//
// Every primitive appends one node holding its value and a closure that maps
// the node's output gradient onto its operands. Nodes are appended in
// evaluation order, so a single reverse sweep over the node list is a valid
// topological traversal.

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dtcwt/signal_core.hpp"

namespace dtcwt::learn {

using Matrix = Eigen::MatrixXd;

struct Var {
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::size_t id = kNone;

    bool valid() const { return id != kNone; }
};

class Tape {
public:
    using Backward = std::function<void(Tape&, const Matrix& grad_out)>;

    /// Input node. Gradients flow into it but never past it.
    Var leaf(Matrix value, const char* name = "leaf");
    /// Appends a primitive application. Throws NumericError on a non-finite value.
    Var record(Matrix value, const char* op, Backward backward);

    const Matrix& value(Var v) const { return nodes_.at(v.id).value; }
    /// Zero matrix of the value's shape when nothing flowed into `v`.
    Matrix grad(Var v) const;
    const char* op(Var v) const { return nodes_.at(v.id).op; }
    std::size_t size() const { return nodes_.size(); }

    void accumulate(Var v, const Matrix& g);
    template <typename Expr>
    void accumulate(Var v, const Eigen::MatrixBase<Expr>& g) {
        accumulate(v, Matrix(g));
    }

    /// Seeds d(output)/d(output) = 1 on a 1x1 node and sweeps once in reverse.
    void backward(Var output);

private:
    struct Node {
        Matrix value;
        Matrix grad;
        const char* op;
        Backward backward;
    };
    std::vector<Node> nodes_;
};

// --- multirate primitives (operands: signal/image `x`, filter column `f`) ---

Var analyze(Tape& t, Var x, Var f, Along dir);
Var synthesize(Tape& t, Var c, Var f, Along dir);

// --- filter maps ---

Var reverse(Tape& t, Var f);
/// g[n] = (-1)^n h[k-1-n]
Var qmf(Tape& t, Var h);

// --- elementwise / linear ---

Var lincomb(Tape& t, Var a, double alpha, Var b, double beta);
inline Var add(Tape& t, Var a, Var b) { return lincomb(t, a, 1.0, b, 1.0); }
inline Var sub(Tape& t, Var a, Var b) { return lincomb(t, a, 1.0, b, -1.0); }
Var scale(Tape& t, Var a, double s);
Var add_constant(Tape& t, Var a, double c);
Var square(Tape& t, Var a);
/// Matched-pair orthonormal combination ((a+b)/sqrt2, (a-b)/sqrt2).
std::pair<Var, Var> butterfly(Tape& t, Var a, Var b);

// --- reductions to 1x1 ---

Var sum(Tape& t, Var a);
Var mean(Tape& t, Var a);
Var sum_squares(Tape& t, Var a);
Var abs_sum(Tape& t, Var a);
Var squared_distance(Tape& t, Var a, Var b);
Var sqrt_scalar(Tape& t, Var a);

/// Treats invalid Vars as zero; returns an invalid Var when both are.
Var add_optional(Tape& t, Var a, Var b);

}  // namespace dtcwt::learn
