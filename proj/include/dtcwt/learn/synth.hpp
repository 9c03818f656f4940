#pragma once

// Sums of octave-spaced sinusoids, x(t) = sum_k a_k sin(2^k t + phi_k), with
// a_k in {0,1} and phi_k uniform on [0, 2pi). Images are oriented planar
// waves of x.

#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "dtcwt/signal_core.hpp"

namespace dtcwt::learn {

using Rng = std::mt19937_64;

struct SynthConfig {
    int harmonics = 5;
    int image_size = 128;
    double base_frequency = 2.0 * std::numbers::pi / 64.0;  // radians per pixel
    int count = 128;
    std::uint64_t seed = 1;

    void validate() const;
};

struct Harmonics {
    std::vector<int> amplitude;  // 0 or 1
    std::vector<double> phase;

    int size() const { return static_cast<int>(amplitude.size()); }
    double operator()(double t) const;
};

/// Draws K indicators and phases; redraws the indicators while all are zero.
Harmonics draw_harmonics(int K, Rng& rng);

Signald gen_signal(const Signald& t, const Harmonics& h);
Signald gen_signal(const Signald& t, const SynthConfig& cfg, Rng& rng);

/// pixel(u, v) = x(f0 (u cos(theta) + v sin(theta))) with theta ~ U[0, pi).
Imaged gen_image(const Harmonics& h, double theta, int size, double f0);
Imaged gen_image(const SynthConfig& cfg, Rng& rng);

/// `cfg.count` images from a generator seeded with `cfg.seed`.
std::vector<Imaged> gen_dataset(const SynthConfig& cfg);

}  // namespace dtcwt::learn
