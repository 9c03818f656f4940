#pragma once

// Flat key=value configuration. Blank lines and '#' comments are ignored;
// unknown keys are rejected. Doubles are written in shortest round-trip form
// so write -> parse reproduces every field bit for bit.

#include <cstdint>
#include <filesystem>
#include <string>

#include "dtcwt/dualtree.hpp"
#include "dtcwt/learn/adam.hpp"
#include "dtcwt/learn/loss.hpp"
#include "dtcwt/learn/synth.hpp"

namespace dtcwt::learn {

struct TrainConfig {
    int steps = 2000;
    int batch_size = 16;
    AdamParams adam;
    std::uint64_t seed = 1;
    Variant variant = Variant::Complex;
    int filter_length = 10;        // k, taps of h1
    int first_filter_length = 10;  // k', taps of h1_first
    int levels = 4;
    int impulse_scale = 4;
    int checkpoint_every = 100;  // 0 writes only the final checkpoint
    int threads = 1;

    void validate() const;
};

struct RunConfig {
    TrainConfig train;
    LossWeights weights = LossWeights::defaults(Variant::Complex);
    double gaussian_alpha = 0.02;
    double gaussian_sigma = 10.0;
    SynthConfig synth;

    void validate() const;
    /// Loss settings for images of side `image_size`.
    LossSetup loss_setup(int image_size) const;
};

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

std::string format_config(const RunConfig& c);
/// Missing keys keep their defaults; lambda3 defaults per variant.
RunConfig parse_config(const std::string& text);
RunConfig read_config(const std::filesystem::path& path);
void write_config(const std::filesystem::path& path, const RunConfig& c);

/// 64-bit FNV-1a of format_config(c).
std::uint64_t config_hash(const RunConfig& c);

}  // namespace dtcwt::learn
