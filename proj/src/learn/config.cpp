#include "dtcwt/learn/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "dtcwt/io.hpp"

namespace dtcwt::learn {

void TrainConfig::validate() const {
    if (steps < 0) throw OutOfRange("train: steps must be >= 0");
    if (batch_size < 1) throw OutOfRange("train: batch_size must be >= 1");
    if (filter_length < 2 || filter_length % 2 != 0 || first_filter_length < 2 ||
        first_filter_length % 2 != 0) {
        throw InvalidFilter("train: filter lengths must be even and >= 2");
    }
    if (levels < 1) throw OutOfRange("train: levels must be >= 1");
    if (impulse_scale < 1) throw OutOfRange("train: impulse_scale must be >= 1");
    if (checkpoint_every < 0) throw OutOfRange("train: checkpoint_every must be >= 0");
    if (threads < 1) throw OutOfRange("train: threads must be >= 1");
    if (!(adam.learning_rate > 0) || !(adam.beta1 >= 0 && adam.beta1 < 1) ||
        !(adam.beta2 >= 0 && adam.beta2 < 1) || !(adam.epsilon > 0)) {
        throw OutOfRange("train: invalid Adam hyperparameters");
    }
}

void RunConfig::validate() const {
    train.validate();
    weights.validate();
    synth.validate();
    if (!(gaussian_sigma > 0)) throw OutOfRange("gaussian_sigma must be positive");
}

LossSetup RunConfig::loss_setup(int image_size) const {
    LossSetup s;
    s.variant = train.variant;
    s.levels = train.levels;
    s.impulse_scale = train.impulse_scale;
    s.weights = weights;
    s.target.alpha = gaussian_alpha;
    s.target.sigma = gaussian_sigma;
    s.target.size = impulse_size(train.filter_length, train.impulse_scale, image_size);
    return s;
}

std::string to_string(Variant v) { return v == Variant::Real ? "real" : "complex"; }

Variant parse_variant(const std::string& s) {
    if (s == "real") return Variant::Real;
    if (s == "complex") return Variant::Complex;
    throw ParseError("unknown variant '" + s + "' (expected real or complex)");
}

namespace {

template <typename Int>
Int parse_int(const std::string& key, const std::string& s) {
    Int v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ParseError("config: " + key + ": not an integer: '" + s + "'");
    }
    return v;
}

double parse_real(const std::string& key, const std::string& s) {
    try {
        return io::parse_double(s);
    } catch (const ParseError&) {
        throw ParseError("config: " + key + ": not a number: '" + s + "'");
    }
}

// Each field once, in file order.
template <typename Config, typename Visitor>
void visit_fields(Config& c, Visitor&& v) {
    v.integer("steps", c.train.steps);
    v.integer("batch_size", c.train.batch_size);
    v.real("learning_rate", c.train.adam.learning_rate);
    v.real("beta1", c.train.adam.beta1);
    v.real("beta2", c.train.adam.beta2);
    v.real("epsilon", c.train.adam.epsilon);
    v.integer("seed", c.train.seed);
    v.variant("variant", c.train.variant);
    v.integer("filter_length", c.train.filter_length);
    v.integer("first_filter_length", c.train.first_filter_length);
    v.integer("levels", c.train.levels);
    v.integer("impulse_scale", c.train.impulse_scale);
    v.integer("checkpoint_every", c.train.checkpoint_every);
    v.integer("threads", c.train.threads);
    v.real("lambda1", c.weights.lambda1);
    v.real("lambda2", c.weights.lambda2);
    v.real("lambda3", c.weights.lambda3);
    v.real("gaussian_alpha", c.gaussian_alpha);
    v.real("gaussian_sigma", c.gaussian_sigma);
    v.integer("synth_harmonics", c.synth.harmonics);
    v.integer("synth_image_size", c.synth.image_size);
    v.real("synth_base_frequency", c.synth.base_frequency);
    v.integer("synth_count", c.synth.count);
    v.integer("synth_seed", c.synth.seed);
}

struct Writer {
    std::ostringstream out;
    template <typename Int>
    void integer(const char* k, Int v) { out << k << " = " << v << '\n'; }
    void real(const char* k, double v) { out << k << " = " << io::format_double(v) << '\n'; }
    void variant(const char* k, Variant v) { out << k << " = " << to_string(v) << '\n'; }
};

struct Reader {
    std::map<std::string, std::string>& kv;
    template <typename Int>
    void integer(const char* k, Int& v) {
        if (auto it = kv.find(k); it != kv.end()) {
            v = parse_int<Int>(k, it->second);
            kv.erase(it);
        }
    }
    void real(const char* k, double& v) {
        if (auto it = kv.find(k); it != kv.end()) {
            v = parse_real(k, it->second);
            kv.erase(it);
        }
    }
    void variant(const char* k, Variant& v) {
        if (auto it = kv.find(k); it != kv.end()) {
            v = parse_variant(it->second);
            kv.erase(it);
        }
    }
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_config(const RunConfig& c) {
    Writer w;
    visit_fields(c, w);
    return w.out.str();
}

RunConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (!kv.emplace(key, trim(line.substr(eq + 1))).second) {
            throw ParseError("config: duplicate key '" + key + "'");
        }
    }

    RunConfig c;
    if (auto it = kv.find("variant"); it != kv.end()) {
        c.weights = LossWeights::defaults(parse_variant(it->second));
    }
    Reader r{kv};
    visit_fields(c, r);
    if (!kv.empty()) throw ParseError("config: unknown key '" + kv.begin()->first + "'");
    c.validate();
    return c;
}

RunConfig read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void write_config(const std::filesystem::path& path, const RunConfig& c) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write config " + path.string());
    out << format_config(c);
}

std::uint64_t config_hash(const RunConfig& c) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : format_config(c)) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace dtcwt::learn
