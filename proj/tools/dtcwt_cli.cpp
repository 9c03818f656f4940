// dtcwt command-line front end.
//
// Exit status: 0 success, 1 usage error, 2 numeric or validation failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dtcwt/diagnostics.hpp"
#include "dtcwt/io.hpp"
#include "dtcwt/learn/config.hpp"
#include "dtcwt/learn/train.hpp"

namespace fs = std::filesystem;
using namespace dtcwt;

namespace {

struct FilterArgs {
    std::string filter = "haar";
    std::string first;
};

void add_filter_options(CLI::App* cmd, FilterArgs& f) {
    cmd->add_option("--filter", f.filter,
                    "scaling filter h1: fixture name or path (default haar)");
    cmd->add_option("--first-filter", f.first,
                    "first-level filter h1'; defaults to the <name>_hfirst sibling of --filter "
                    "when it exists, else --filter itself");
}

Filterd load_filter(const std::string& name) { return io::read_filter(io::resolve_fixture(name)); }

DualTreeFilterSetd load_filter_set(const FilterArgs& a) {
    Filterd h = load_filter(a.filter);
    if (!a.first.empty()) return {h, load_filter(a.first)};
    const fs::path p = io::resolve_fixture(a.filter);
    const std::string stem = p.stem().string();
    if (stem.size() > 2 && stem.ends_with("_h")) {
        const fs::path sibling =
            p.parent_path() / (stem.substr(0, stem.size() - 2) + "_hfirst" + p.extension().string());
        if (fs::exists(sibling)) return {h, io::read_filter(sibling)};
    }
    return {h, h};
}

learn::RunConfig load_config(const std::string& path) {
    return path.empty() ? learn::RunConfig{} : learn::read_config(path);
}

void finish_report(const DiagnosticReport& r, const std::string& out_dir) {
    std::cout << r.to_text();
    if (!out_dir.empty()) r.write(fs::path(out_dir) / "report.txt");
}

std::vector<fs::path> list_images(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        const auto ext = e.path().extension();
        if (e.is_regular_file() && (ext == ".csv" || ext == ".pgm")) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ParseError("no .csv or .pgm images in " + dir.string());
    return files;
}

// ---------------------------------------------------------------------------

struct TransformArgs {
    FilterArgs filters;
    std::string kind = "dwt";
    std::string variant = "complex";
    int levels = 3;
    std::string in, out, tile;
};

int run_transform(const TransformArgs& a) {
    const Imaged x = io::read_image(a.in);
    const bool one_d = x.rows() == 1 || x.cols() == 1;
    if (a.kind == "dwt") {
        const Filterd h = load_filter(a.filters.filter);
        if (one_d) {
            io::write_pyramid(a.out, dwt1d_forward(Signald(x.reshaped()), h, a.levels));
        } else {
            const auto p = dwt2d_forward(x, h, a.levels);
            io::write_pyramid(a.out, p);
            if (!a.tile.empty()) io::write_pgm_rescaled(a.tile, tile_coefficients(p));
        }
        return 0;
    }
    const auto fs = load_filter_set(a.filters);
    if (one_d) {
        io::write_pyramid(a.out, dtcwt1d_forward(Signald(x.reshaped()), fs, a.levels));
    } else if (learn::parse_variant(a.variant) == Variant::Real) {
        io::write_pyramid(a.out, dtcwt2d_real_forward(x, fs, a.levels));
    } else {
        io::write_pyramid(a.out, dtcwt2d_complex_forward(x, fs, a.levels));
    }
    return 0;
}

int run_inverse(const FilterArgs& f, const std::string& in, const std::string& out) {
    const auto pyr = io::read_pyramid(fs::path(in));
    Imaged y = std::visit(
        [&](const auto& p) -> Imaged {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, Pyramid1Dd>) {
                return dwt1d_inverse(p, load_filter(f.filter)).transpose();
            } else if constexpr (std::is_same_v<P, DualTreePyramid1Dd>) {
                return dtcwt1d_inverse(p, load_filter_set(f)).transpose();
            } else if constexpr (std::is_same_v<P, Pyramid2Dd>) {
                return dwt2d_inverse(p, load_filter(f.filter));
            } else if constexpr (std::is_same_v<P, DualTreePyramidReal2Dd>) {
                return dtcwt2d_real_inverse(p, load_filter_set(f));
            } else {
                return dtcwt2d_complex_inverse(p, load_filter_set(f));
            }
        },
        pyr);
    io::write_image(out, y);
    return 0;
}

struct TrainArgs {
    std::string config, out, data;
    std::optional<int> steps;
    std::optional<std::uint64_t> seed;
    std::string variant;
    bool quiet = false;
};

int run_train(const TrainArgs& a) {
    auto cfg = load_config(a.config);
    if (!a.variant.empty()) {
        cfg.train.variant = learn::parse_variant(a.variant);
        cfg.weights.lambda3 = learn::LossWeights::defaults(cfg.train.variant).lambda3;
    }
    if (a.steps) cfg.train.steps = *a.steps;
    if (a.seed) cfg.train.seed = *a.seed;
    cfg.validate();

    std::vector<Imaged> data;
    if (a.data.empty()) {
        data = learn::gen_dataset(cfg.synth);
    } else {
        for (const auto& p : list_images(a.data)) data.push_back(io::read_image(p));
    }

    const fs::path out(a.out);
    fs::create_directories(out);
    learn::write_config(out / "config.txt", cfg);
    learn::TrainOptions opt;
    opt.out_dir = out;
    if (!a.quiet) {
        opt.on_step = [](int step, const learn::LossReport& r, const DualTreeFilterSetd&) {
            if (step % 50 == 0 || step == 1) {
                std::fprintf(stderr, "step %5d  total %.6g  rec %.3g  l1 %.4g  lw %.3g  lg %.4g\n",
                             step, r.total, r.reconstruction, r.sparsity, r.constraint,
                             r.gaussian);
            }
        };
    }
    const auto result = learn::train(data, cfg, opt);

    DiagnosticReport rep;
    rep.name = "train";
    rep.metrics["steps"] = static_cast<double>(result.history.size());
    if (!result.history.empty()) {
        const auto& last = result.history.back();
        rep.metrics["total"] = last.total;
        rep.metrics["reconstruction"] = last.reconstruction;
        rep.metrics["sparsity"] = last.sparsity;
        rep.metrics["constraint"] = last.constraint;
        rep.metrics["gaussian"] = last.gaussian;
    }
    rep.artifacts = {out / learn::kCheckpointH1, out / learn::kCheckpointH1First,
                     out / learn::kCheckpointMeta, out / learn::kLossHistory,
                     out / "config.txt"};
    if (result.diverged) {
        rep.status = "diverged";
        finish_report(rep, a.out);
        std::cerr << "error: " << result.message << '\n';
        return 2;
    }
    finish_report(rep, a.out);
    return 0;
}

struct GenArgs {
    std::string config, out;
    std::optional<int> count, size, harmonics;
    std::optional<std::uint64_t> seed;
    bool preview = false;
};

int run_gen_data(const GenArgs& a) {
    auto cfg = load_config(a.config);
    if (a.count) cfg.synth.count = *a.count;
    if (a.size) cfg.synth.image_size = *a.size;
    if (a.harmonics) cfg.synth.harmonics = *a.harmonics;
    if (a.seed) cfg.synth.seed = *a.seed;
    cfg.validate();
    const auto images = learn::gen_dataset(cfg.synth);
    const fs::path out(a.out);
    fs::create_directories(out);
    DiagnosticReport rep;
    rep.name = "gen-data";
    rep.metrics["count"] = static_cast<double>(images.size());
    rep.metrics["size"] = cfg.synth.image_size;
    for (std::size_t i = 0; i < images.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "image_%04zu", i);
        io::write_csv(out / (std::string(name) + ".csv"), images[i]);
        rep.artifacts.push_back(out / (std::string(name) + ".csv"));
        if (a.preview) {
            io::write_pgm_rescaled(out / (std::string(name) + ".pgm"), images[i]);
            rep.artifacts.push_back(out / (std::string(name) + ".pgm"));
        }
    }
    learn::write_config(out / "config.txt", cfg);
    rep.artifacts.push_back(out / "config.txt");
    finish_report(rep, a.out);
    return 0;
}

struct ImpulseArgs {
    FilterArgs filters;
    std::string config, variant, out;
    int band = 0;
    std::optional<int> scale, size;
};

int run_impulse(const ImpulseArgs& a) {
    const auto cfg = load_config(a.config);
    const Variant v = a.variant.empty() ? cfg.train.variant : learn::parse_variant(a.variant);
    const int scale = a.scale.value_or(cfg.train.impulse_scale);
    const auto fs = load_filter_set(a.filters);
    const int size = a.size.value_or(learn::impulse_size(fs.h1.size(), scale));
    if (a.band < 0 || a.band > 6) throw OutOfRange("--band must be in 0..6");

    DiagnosticReport rep;
    rep.name = "impulse";
    rep.metrics["scale"] = scale;
    rep.metrics["size"] = size;
    std::vector<double> angles;
    const fs::path out(a.out);
    if (!a.out.empty()) fs::create_directories(out);
    for (int b = 1; b <= 6; ++b) {
        if (a.band != 0 && b != a.band) continue;
        const auto ir = learn::impulse_response(fs, b, scale, v, size);
        const Imaged m = ir.magnitude();
        const std::string tag = "b" + std::to_string(b);
        rep.metrics["energy_" + tag] = m.sum();
        if (m.sum() > 0) {
            const auto o = orientation_purity(m);
            rep.metrics["purity_" + tag] = o.purity;
            rep.metrics["angle_deg_" + tag] = o.angle * 180.0 / std::numbers::pi;
            angles.push_back(o.angle);
        }
        if (!a.out.empty()) {
            io::write_csv(out / ("impulse_" + tag + "_real.csv"), ir.real);
            rep.artifacts.push_back(out / ("impulse_" + tag + "_real.csv"));
            if (ir.imag.size() != 0) {
                io::write_csv(out / ("impulse_" + tag + "_imag.csv"), ir.imag);
                rep.artifacts.push_back(out / ("impulse_" + tag + "_imag.csv"));
            }
            io::write_csv(out / ("impulse_" + tag + "_magnitude.csv"), m);
            rep.artifacts.push_back(out / ("impulse_" + tag + "_magnitude.csv"));
        }
    }
    if (angles.size() > 1) {
        rep.metrics["distinct_angles"] =
            count_distinct_angles(angles, 20.0 * std::numbers::pi / 180.0);
    }
    finish_report(rep, a.out);
    return 0;
}

struct DiagArgs {
    FilterArgs filters;
    std::string config, variant, out, image;
    int level = 0;
    int shift = 1;
    int qlevels = 9;
    int size = 256;
};

Variant diag_variant(const DiagArgs& a) {
    if (!a.variant.empty()) return learn::parse_variant(a.variant);
    return load_config(a.config).train.variant;
}

int run_diag_shift(const DiagArgs& a) {
    const auto fs = load_filter_set(a.filters);
    ShiftVarianceOptions opt;
    opt.shift = a.shift;
    opt.out_dir = a.out;
    finish_report(diag_shift_variance(fs, fs.h1, a.level > 0 ? a.level : 3, opt), a.out);
    return 0;
}

int run_diag_alias(const DiagArgs& a) {
    const auto fs = load_filter_set(a.filters);
    auto r = diag_aliasing(fs, fs.h1, a.level > 0 ? a.level : 1, a.qlevels, a.out);
    r.metrics["complex"] = diag_variant(a) == Variant::Complex ? 1.0 : 0.0;
    finish_report(r, a.out);
    return 0;
}

int run_diag_band(const DiagArgs& a) {
    const auto fs = load_filter_set(a.filters);
    EdgeScene scene;
    if (a.image.empty()) {
        scene = edge_scene(a.size);
    } else {
        scene.image = io::read_image(a.image);
    }
    finish_report(diag_band_reconstruction(fs, fs.h1, scene, a.level > 0 ? a.level : 4,
                                           diag_variant(a), a.out),
                  a.out);
    return 0;
}

void add_diag_common(CLI::App* cmd, DiagArgs& d) {
    add_filter_options(cmd, d.filters);
    cmd->add_option("--config", d.config, "key=value config file");
    cmd->add_option("--variant", d.variant, "real or complex")
        ->check(CLI::IsMember({"real", "complex"}));
    cmd->add_option("--out", d.out, "output directory for CSV panels and report.txt");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual-tree complex wavelet transform toolkit"};
    app.require_subcommand(1);

    TransformArgs ta;
    auto* transform = app.add_subcommand("transform", "forward DWT or DTCWT of an image or signal");
    add_filter_options(transform, ta.filters);
    transform->add_option("--kind", ta.kind, "dwt or dtcwt")->check(CLI::IsMember({"dwt", "dtcwt"}));
    transform->add_option("--variant", ta.variant, "2D dual tree: real or complex")
        ->check(CLI::IsMember({"real", "complex"}));
    transform->add_option("--levels", ta.levels, "decomposition levels")->check(CLI::PositiveNumber);
    transform->add_option("--in", ta.in, "input .pgm or .csv (one row or column: 1D)")->required();
    transform->add_option("--out", ta.out, "output pyramid file")->required();
    transform->add_option("--tile", ta.tile, "2D DWT: coefficient mosaic as PGM");

    FilterArgs ia;
    std::string inv_in, inv_out;
    auto* inverse = app.add_subcommand("inverse", "reconstruct from a pyramid file");
    add_filter_options(inverse, ia);
    inverse->add_option("--in", inv_in, "pyramid file")->required();
    inverse->add_option("--out", inv_out, "output .pgm or .csv")->required();

    TrainArgs tr;
    auto* train = app.add_subcommand("train", "learn (h1, h1') with Adam on synthetic images");
    train->add_option("--config", tr.config, "key=value config file");
    train->add_option("--out", tr.out, "output directory")->required();
    train->add_option("--data", tr.data, "directory of .csv/.pgm images (default: synthesize)");
    train->add_option("--steps", tr.steps, "override steps");
    train->add_option("--seed", tr.seed, "override training seed");
    train->add_option("--variant", tr.variant, "real or complex")
        ->check(CLI::IsMember({"real", "complex"}));
    train->add_flag("--quiet", tr.quiet, "no progress lines");

    GenArgs ga;
    auto* gen = app.add_subcommand("gen-data", "write a synthetic image dataset");
    gen->add_option("--config", ga.config, "key=value config file");
    gen->add_option("--out", ga.out, "output directory")->required();
    gen->add_option("--count", ga.count, "number of images");
    gen->add_option("--size", ga.size, "image side");
    gen->add_option("--harmonics", ga.harmonics, "harmonic count K");
    gen->add_option("--seed", ga.seed, "generator seed");
    gen->add_flag("--preview", ga.preview, "also write rescaled PGM previews");

    ImpulseArgs im;
    auto* impulse = app.add_subcommand("impulse", "impulse responses of the six dual-tree bands");
    add_filter_options(impulse, im.filters);
    impulse->add_option("--config", im.config, "key=value config file");
    impulse->add_option("--variant", im.variant, "real or complex")
        ->check(CLI::IsMember({"real", "complex"}));
    impulse->add_option("--band", im.band, "band 1..6, 0 for all")->check(CLI::Range(0, 6));
    impulse->add_option("--scale", im.scale, "scale (default from config: 4)");
    impulse->add_option("--size", im.size, "image side (default k * 2^scale)");
    impulse->add_option("--out", im.out, "output directory");

    auto* diagnose = app.add_subcommand("diagnose", "shift, aliasing and band reconstruction demos");
    diagnose->require_subcommand(1);
    DiagArgs ds, da, db;
    auto* shift = diagnose->add_subcommand("shift", "step edge shifted by one sample");
    add_diag_common(shift, ds);
    shift->add_option("--level", ds.level, "level (default 3)")->check(CLI::PositiveNumber);
    shift->add_option("--shift", ds.shift, "shift in samples");
    auto* alias = diagnose->add_subcommand("alias", "coefficient quantization artifacts");
    add_diag_common(alias, da);
    alias->add_option("--levels", da.level, "levels (default 1)")->check(CLI::PositiveNumber);
    alias->add_option("--qlevels", da.qlevels, "quantization levels, 0 for none");
    auto* band = diagnose->add_subcommand("band-recon", "single-level reconstruction of edges");
    add_diag_common(band, db);
    band->add_option("--level", db.level, "level (default 4)")->check(CLI::PositiveNumber);
    band->add_option("--size", db.size, "side of the analytic scene");
    band->add_option("--image", db.image, "reconstruct this image instead (no edge metrics)");

    std::string cmp_f, cmp_ref, cmp_out;
    auto* compare = app.add_subcommand("compare-filters", "shift/sign/reversal-invariant distance");
    compare->add_option("filter", cmp_f, "filter")->required();
    compare->add_option("reference", cmp_ref, "reference filter")->required();
    compare->add_option("--out", cmp_out, "output directory for report.txt");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (*transform) return run_transform(ta);
        if (*inverse) return run_inverse(ia, inv_in, inv_out);
        if (*train) return run_train(tr);
        if (*gen) return run_gen_data(ga);
        if (*impulse) return run_impulse(im);
        if (*shift) return run_diag_shift(ds);
        if (*alias) return run_diag_alias(da);
        if (*band) return run_diag_band(db);
        if (*compare) {
            DiagnosticReport r;
            r.name = "compare-filters";
            r.metrics["distance"] = compare_filters(load_filter(cmp_f), load_filter(cmp_ref));
            finish_report(r, cmp_out);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    std::cerr << app.help();
    return 1;
}
