#include "dtcwt/learn/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "dtcwt/io.hpp"

namespace dtcwt::learn {

namespace {

Filterd near_haar(int k, int offset, Rng& rng, double noise) {
    std::uniform_real_distribution<double> u(-noise, noise);
    Signald h(k);
    for (auto& v : h) v = u(rng);
    h(offset) += 1.0 / std::sqrt(2.0);
    h(offset + 1) += 1.0 / std::sqrt(2.0);
    return Filterd(h / h.norm());
}

void write_meta(const std::filesystem::path& path, int step, const LossReport& r,
                std::uint64_t hash, std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
    out << "step = " << step << '\n'
        << "total = " << io::format_double(r.total) << '\n'
        << "reconstruction = " << io::format_double(r.reconstruction) << '\n'
        << "sparsity = " << io::format_double(r.sparsity) << '\n'
        << "constraint = " << io::format_double(r.constraint) << '\n'
        << "gaussian = " << io::format_double(r.gaussian) << '\n'
        << "config_hash = " << hex << '\n'
        << "seed = " << seed << '\n';
}

}  // namespace

DualTreeFilterSetd initial_filters(int k, int k_first, Rng& rng, double noise) {
    if (k < 2 || k % 2 != 0 || k_first < 2 || k_first % 2 != 0) {
        throw InvalidFilter("initial_filters: lengths must be even and >= 2");
    }
    Filterd h1 = near_haar(k, k / 2 - 1, rng, noise);
    Filterd h1_first = near_haar(k_first, std::min(k_first / 2, k_first - 2), rng, noise);
    return {std::move(h1), std::move(h1_first)};
}

void write_loss_history(const std::filesystem::path& path, const std::vector<LossReport>& h) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << "step,total,reconstruction,sparsity,constraint,gaussian\n";
    for (std::size_t i = 0; i < h.size(); ++i) {
        out << i + 1 << ',' << io::format_double(h[i].total) << ','
            << io::format_double(h[i].reconstruction) << ',' << io::format_double(h[i].sparsity)
            << ',' << io::format_double(h[i].constraint) << ','
            << io::format_double(h[i].gaussian) << '\n';
    }
}

TrainResult train(const std::vector<Imaged>& data, const RunConfig& cfg,
                  const TrainOptions& opt) {
    cfg.validate();
    if (data.empty()) throw OutOfRange("train: empty dataset");
    const Index side = data.front().rows();
    for (const auto& img : data) {
        if (img.rows() != side || img.cols() != side) {
            throw InvalidLength("train: images must be square and of equal size");
        }
    }
    require_dyadic_2d(side, side, cfg.train.levels, "train");
    require_dyadic_2d(side, side, cfg.train.impulse_scale, "train (impulse scale)");
    const LossSetup setup = cfg.loss_setup(static_cast<int>(side));

    Rng rng(cfg.train.seed);
    TrainResult result;
    result.filters = opt.init ? *opt.init
                              : initial_filters(cfg.train.filter_length,
                                                cfg.train.first_filter_length, rng);
    const Index k = result.filters.h1.size();
    AdamState s1 = AdamState::zeros(k);
    AdamState s2 = AdamState::zeros(result.filters.h1_first.size());

    const bool save = !opt.out_dir.empty();
    const std::uint64_t hash = config_hash(cfg);
    if (save) std::filesystem::create_directories(opt.out_dir);
    auto checkpoint = [&](int step, const LossReport& r) {
        if (!save) return;
        io::write_filter(opt.out_dir / kCheckpointH1, result.filters.h1);
        io::write_filter(opt.out_dir / kCheckpointH1First, result.filters.h1_first);
        write_meta(opt.out_dir / kCheckpointMeta, step, r, hash, cfg.train.seed);
    };

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::size_t cursor = order.size();
    const std::size_t batch = std::min<std::size_t>(cfg.train.batch_size, data.size());
    std::vector<Imaged> images(batch);

    LossReport last{};
    for (int step = 1; step <= cfg.train.steps; ++step) {
        for (auto& img : images) {
            if (cursor == order.size()) {
                std::shuffle(order.begin(), order.end(), rng);
                cursor = 0;
            }
            img = data[order[cursor++]];
        }

        LossGradient lg;
        try {
            lg = loss_and_gradient(images, result.filters, setup, cfg.train.threads);
            if (!std::isfinite(lg.report.total)) throw NumericError("non-finite total loss");
        } catch (const NumericError& e) {
            result.diverged = true;
            result.message = "diverged at step " + std::to_string(step) + ": " + e.what();
            break;
        }

        Signald h1 = result.filters.h1.taps();
        Signald h1f = result.filters.h1_first.taps();
        adam_step(h1, lg.d_h1, s1, cfg.train.adam);
        adam_step(h1f, lg.d_h1_first, s2, cfg.train.adam);
        if (!h1.allFinite() || !h1f.allFinite()) {
            result.diverged = true;
            result.message = "diverged at step " + std::to_string(step) + ": non-finite update";
            break;
        }
        if (opt.on_step) opt.on_step(step, lg.report, result.filters);
        result.filters = {Filterd(h1), Filterd(h1f)};
        result.history.push_back(lg.report);
        last = lg.report;
        if (cfg.train.checkpoint_every > 0 && step % cfg.train.checkpoint_every == 0) {
            checkpoint(step, lg.report);
        }
    }

    checkpoint(static_cast<int>(result.history.size()), last);
    if (save) write_loss_history(opt.out_dir / kLossHistory, result.history);
    return result;
}

}  // namespace dtcwt::learn
