#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dtcwt/learn/config.hpp"
#include "dtcwt/learn/loss.hpp"

namespace dtcwt::learn {

/// Haar pair at the centre of a length-k filter, plus U[-noise, noise] on
/// every tap, projected to unit norm. h1 holds the pair at (k/2-1, k/2);
/// h1_first one tap later, so the two trees start offset by one sample.
DualTreeFilterSetd initial_filters(int k, int k_first, Rng& rng, double noise = 1e-2);

struct TrainOptions {
    /// Checkpoints, metadata and loss history go here; empty disables output.
    std::filesystem::path out_dir;
    /// Starting filters; drawn with initial_filters when unset.
    std::optional<DualTreeFilterSetd> init;
    /// Called after every step with the batch loss and the parameters it was
    /// evaluated at.
    std::function<void(int step, const LossReport&, const DualTreeFilterSetd&)> on_step;
};

struct TrainResult {
    DualTreeFilterSetd filters{Filterd::haar(), Filterd::haar()};  // last finite parameters
    std::vector<LossReport> history;  // one entry per completed step
    bool diverged = false;
    std::string message;
};

/// Adam on (h1, h1_first) over shuffled mini-batches of `data`. Each history
/// entry is the batch loss at the parameters before that step's update.
TrainResult train(const std::vector<Imaged>& data, const RunConfig& cfg,
                  const TrainOptions& opt = {});

// Output layout inside TrainOptions::out_dir.
inline constexpr const char* kCheckpointH1 = "checkpoint_h1.flt";
inline constexpr const char* kCheckpointH1First = "checkpoint_h1_first.flt";
inline constexpr const char* kCheckpointMeta = "checkpoint.meta";
inline constexpr const char* kLossHistory = "loss_history.csv";

void write_loss_history(const std::filesystem::path& path, const std::vector<LossReport>& h);

}  // namespace dtcwt::learn
