#include "dtcwt/learn/synth.hpp"

#include <algorithm>
#include <cmath>

#include "dtcwt/errors.hpp"

namespace dtcwt::learn {

void SynthConfig::validate() const {
    if (harmonics < 1) throw OutOfRange("synth: harmonics must be >= 1");
    if (image_size < 1) throw OutOfRange("synth: image size must be >= 1");
    if (count < 1) throw OutOfRange("synth: count must be >= 1");
    if (!(base_frequency > 0) || !std::isfinite(base_frequency)) {
        throw OutOfRange("synth: base frequency must be positive");
    }
}

double Harmonics::operator()(double t) const {
    double x = 0.0;
    for (int k = 0; k < size(); ++k) {
        if (amplitude[k] != 0) x += std::sin(std::ldexp(t, k) + phase[k]);
    }
    return x;
}

Harmonics draw_harmonics(int K, Rng& rng) {
    if (K < 1) throw OutOfRange("synth: harmonics must be >= 1");
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    Harmonics h;
    h.amplitude.resize(K);
    do {
        for (auto& a : h.amplitude) a = coin(rng) ? 1 : 0;
    } while (std::all_of(h.amplitude.begin(), h.amplitude.end(), [](int a) { return a == 0; }));
    h.phase.resize(K);
    for (auto& p : h.phase) p = angle(rng);
    return h;
}

Signald gen_signal(const Signald& t, const Harmonics& h) {
    return t.unaryExpr([&](double s) { return h(s); });
}

Signald gen_signal(const Signald& t, const SynthConfig& cfg, Rng& rng) {
    cfg.validate();
    return gen_signal(t, draw_harmonics(cfg.harmonics, rng));
}

Imaged gen_image(const Harmonics& h, double theta, int size, double f0) {
    const double c = std::cos(theta), s = std::sin(theta);
    Imaged img(size, size);
    for (int v = 0; v < size; ++v) {
        for (int u = 0; u < size; ++u) img(u, v) = h(f0 * (u * c + v * s));
    }
    return img;
}

Imaged gen_image(const SynthConfig& cfg, Rng& rng) {
    cfg.validate();
    const Harmonics h = draw_harmonics(cfg.harmonics, rng);
    const double theta = std::uniform_real_distribution<double>(0.0, std::numbers::pi)(rng);
    return gen_image(h, theta, cfg.image_size, cfg.base_frequency);
}

std::vector<Imaged> gen_dataset(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    std::vector<Imaged> out;
    out.reserve(cfg.count);
    for (int i = 0; i < cfg.count; ++i) out.push_back(gen_image(cfg, rng));
    return out;
}

}  // namespace dtcwt::learn
