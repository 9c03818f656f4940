#pragma once

#include <cmath>

#include "dtcwt/errors.hpp"
#include "dtcwt/signal_core.hpp"

namespace dtcwt::learn {

struct AdamParams {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    Signald m;
    Signald v;
    long step = 0;

    static AdamState zeros(Index n) { return {Signald::Zero(n), Signald::Zero(n), 0}; }
};

/// Bias-corrected Adam update, in place.
inline void adam_step(Signald& params, const Signald& grads, AdamState& s, const AdamParams& p) {
    if (grads.size() != params.size() || s.m.size() != params.size() ||
        s.v.size() != params.size()) {
        throw InvalidLength("adam_step: parameter, gradient and state sizes differ");
    }
    ++s.step;
    s.m = p.beta1 * s.m + (1.0 - p.beta1) * grads;
    s.v = p.beta2 * s.v + (1.0 - p.beta2) * grads.cwiseAbs2();
    const double c1 = 1.0 - std::pow(p.beta1, static_cast<double>(s.step));
    const double c2 = 1.0 - std::pow(p.beta2, static_cast<double>(s.step));
    params.array() -=
        p.learning_rate * (s.m.array() / c1) / ((s.v.array() / c2).sqrt() + p.epsilon);
}

}  // namespace dtcwt::learn
