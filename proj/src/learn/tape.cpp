#include "dtcwt/learn/tape.hpp"

#include <cmath>

namespace dtcwt::learn {

namespace {

Filterd as_filter(const Matrix& m) { return Filterd(Signald(m.reshaped())); }

// d/df[m] of sum(small .* analyze(big, f)): sum over outputs p of
// small[p] * big[(2p + m) mod N] along the filtering direction.
Matrix filter_gradient(const Matrix& big, const Matrix& small, Index k, Along dir) {
    Matrix df = Matrix::Zero(k, 1);
    if (dir == Along::Columns) {
        const Index n = big.rows();
        for (Index m = 0; m < k; ++m) {
            double acc = 0.0;
            for (Index p = 0; p < small.rows(); ++p) {
                acc += small.row(p).dot(big.row((2 * p + m) % n));
            }
            df(m) = acc;
        }
    } else {
        const Index n = big.cols();
        for (Index m = 0; m < k; ++m) {
            double acc = 0.0;
            for (Index p = 0; p < small.cols(); ++p) {
                acc += small.col(p).dot(big.col((2 * p + m) % n));
            }
            df(m) = acc;
        }
    }
    return df;
}

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

}  // namespace

Var Tape::leaf(Matrix value, const char* name) { return record(std::move(value), name, nullptr); }

Var Tape::record(Matrix value, const char* op, Backward backward) {
    if (!value.allFinite()) {
        throw NumericError("tape node #" + std::to_string(nodes_.size()) + " (" + op +
                           "): non-finite value");
    }
    nodes_.push_back(Node{std::move(value), Matrix(), op, std::move(backward)});
    return Var{nodes_.size() - 1};
}

Matrix Tape::grad(Var v) const {
    const auto& n = nodes_.at(v.id);
    if (n.grad.size() == 0) return Matrix::Zero(n.value.rows(), n.value.cols());
    return n.grad;
}

void Tape::accumulate(Var v, const Matrix& g) {
    auto& n = nodes_.at(v.id);
    if (g.rows() != n.value.rows() || g.cols() != n.value.cols()) {
        throw StructuralError(std::string("tape: gradient shape mismatch at node ") + n.op);
    }
    if (n.grad.size() == 0) {
        n.grad = g;
    } else {
        n.grad += g;
    }
}

void Tape::backward(Var output) {
    if (value(output).size() != 1) throw StructuralError("tape: backward needs a scalar output");
    for (auto& n : nodes_) n.grad.resize(0, 0);
    nodes_[output.id].grad = Matrix::Ones(1, 1);
    for (std::size_t i = output.id + 1; i-- > 0;) {
        if (nodes_[i].grad.size() == 0 || !nodes_[i].backward) continue;
        if (!nodes_[i].grad.allFinite()) {
            throw NumericError("tape node #" + std::to_string(i) + " (" + nodes_[i].op +
                               "): non-finite gradient");
        }
        // the closure may append to other nodes' grads but never reallocates nodes_
        const Matrix g = nodes_[i].grad;
        nodes_[i].backward(*this, g);
    }
}

Var analyze(Tape& t, Var x, Var f, Along dir) {
    Matrix y = analyze_along(t.value(x), as_filter(t.value(f)), dir);
    return t.record(std::move(y), "analyze", [x, f, dir](Tape& tp, const Matrix& gy) {
        const Matrix& fv = tp.value(f);
        tp.accumulate(x, synthesize_along(gy, as_filter(fv), dir));
        tp.accumulate(f, filter_gradient(tp.value(x), gy, fv.size(), dir));
    });
}

Var synthesize(Tape& t, Var c, Var f, Along dir) {
    Matrix y = synthesize_along(t.value(c), as_filter(t.value(f)), dir);
    return t.record(std::move(y), "synthesize", [c, f, dir](Tape& tp, const Matrix& gy) {
        const Matrix& fv = tp.value(f);
        tp.accumulate(c, analyze_along(gy, as_filter(fv), dir));
        tp.accumulate(f, filter_gradient(gy, tp.value(c), fv.size(), dir));
    });
}

Var reverse(Tape& t, Var f) {
    Matrix r = t.value(f).colwise().reverse();
    return t.record(std::move(r), "reverse", [f](Tape& tp, const Matrix& g) {
        tp.accumulate(f, g.colwise().reverse());
    });
}

Var qmf(Tape& t, Var h) {
    const Matrix& hv = t.value(h);
    const Index k = hv.rows();
    Matrix g(k, 1);
    for (Index n = 0; n < k; ++n) g(n) = (n % 2 == 0 ? 1.0 : -1.0) * hv(k - 1 - n);
    return t.record(std::move(g), "qmf", [h, k](Tape& tp, const Matrix& gg) {
        Matrix dh(k, 1);
        for (Index n = 0; n < k; ++n) dh(k - 1 - n) = (n % 2 == 0 ? 1.0 : -1.0) * gg(n);
        tp.accumulate(h, dh);
    });
}

Var lincomb(Tape& t, Var a, double alpha, Var b, double beta) {
    Matrix v = alpha * t.value(a) + beta * t.value(b);
    return t.record(std::move(v), "lincomb", [a, b, alpha, beta](Tape& tp, const Matrix& g) {
        tp.accumulate(a, alpha * g);
        tp.accumulate(b, beta * g);
    });
}

Var scale(Tape& t, Var a, double s) {
    Matrix v = s * t.value(a);
    return t.record(std::move(v), "scale", [a, s](Tape& tp, const Matrix& g) {
        tp.accumulate(a, s * g);
    });
}

Var add_constant(Tape& t, Var a, double c) {
    Matrix v = t.value(a).array() + c;
    return t.record(std::move(v), "add_constant", [a](Tape& tp, const Matrix& g) {
        tp.accumulate(a, g);
    });
}

Var square(Tape& t, Var a) {
    Matrix v = t.value(a).array().square();
    return t.record(std::move(v), "square", [a](Tape& tp, const Matrix& g) {
        tp.accumulate(a, (2.0 * tp.value(a).array() * g.array()).matrix());
    });
}

std::pair<Var, Var> butterfly(Tape& t, Var a, Var b) {
    const double s = 1.0 / std::sqrt(2.0);
    return {lincomb(t, a, s, b, s), lincomb(t, a, s, b, -s)};
}

Var sum(Tape& t, Var a) {
    return t.record(scalar(t.value(a).sum()), "sum", [a](Tape& tp, const Matrix& g) {
        const Matrix& av = tp.value(a);
        tp.accumulate(a, Matrix::Constant(av.rows(), av.cols(), g(0, 0)));
    });
}

Var mean(Tape& t, Var a) {
    const double n = static_cast<double>(t.value(a).size());
    return t.record(scalar(t.value(a).mean()), "mean", [a, n](Tape& tp, const Matrix& g) {
        const Matrix& av = tp.value(a);
        tp.accumulate(a, Matrix::Constant(av.rows(), av.cols(), g(0, 0) / n));
    });
}

Var sum_squares(Tape& t, Var a) {
    return t.record(scalar(t.value(a).squaredNorm()), "sum_squares",
                    [a](Tape& tp, const Matrix& g) {
                        tp.accumulate(a, (2.0 * g(0, 0)) * tp.value(a));
                    });
}

Var abs_sum(Tape& t, Var a) {
    return t.record(scalar(t.value(a).cwiseAbs().sum()), "abs_sum",
                    [a](Tape& tp, const Matrix& g) {
                        tp.accumulate(a, (g(0, 0) * tp.value(a).array().sign()).matrix());
                    });
}

Var squared_distance(Tape& t, Var a, Var b) {
    const double d = (t.value(a) - t.value(b)).squaredNorm();
    return t.record(scalar(d), "squared_distance", [a, b](Tape& tp, const Matrix& g) {
        const Matrix diff = (2.0 * g(0, 0)) * (tp.value(a) - tp.value(b));
        tp.accumulate(a, diff);
        tp.accumulate(b, -diff);
    });
}

Var sqrt_scalar(Tape& t, Var a) {
    const double v = std::sqrt(t.value(a)(0, 0));
    return t.record(scalar(v), "sqrt", [a, v](Tape& tp, const Matrix& g) {
        tp.accumulate(a, scalar(g(0, 0) / (2.0 * v)));
    });
}

Var add_optional(Tape& t, Var a, Var b) {
    if (!a.valid()) return b;
    if (!b.valid()) return a;
    return add(t, a, b);
}

}  // namespace dtcwt::learn
