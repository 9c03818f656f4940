#include "dtcwt/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#ifndef DTCWT_DEFAULT_FIXTURE_DIR
#define DTCWT_DEFAULT_FIXTURE_DIR "fixtures"
#endif

namespace dtcwt::io {

namespace {

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw ParseError("cannot open " + path.string());
    return in;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, mode);
    if (!out) throw ParseError("cannot write " + path.string());
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// "key=value" fields of a "# tag k=v k=v" header line.
std::map<std::string, std::string> header_fields(std::string_view line, std::string_view tag) {
    std::istringstream ss{std::string(line)};
    std::string hash, got;
    ss >> hash >> got;
    if (hash != "#" || got != tag) {
        throw ParseError("expected header '# " + std::string(tag) + " ...', got '" +
                         std::string(line) + "'");
    }
    std::map<std::string, std::string> fields;
    std::string kv;
    while (ss >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            fields[kv] = "";
        } else {
            fields[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
    }
    return fields;
}

long header_int(const std::map<std::string, std::string>& f, const std::string& key) {
    auto it = f.find(key);
    if (it == f.end()) throw ParseError("header is missing '" + key + "'");
    long v = 0;
    const auto& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("header field '" + key + "' is not an integer: " + s);
    }
    return v;
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

std::string format_double_sci(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::scientific, 16);
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ParseError("not a number: '" + std::string(s) + "'");
    }
    return v;
}

// ---------------------------------------------------------------------------
// filters

Filterd parse_filter(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(origin + ": empty filter file");
    const auto fields = header_fields(trim(line), "dtfilter");
    if (fields.count("v1") == 0) {
        throw ParseError(origin + ": unsupported filter file version");
    }
    const long k = header_int(fields, "k");
    std::vector<double> taps;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty()) continue;
        taps.push_back(parse_double(t));
    }
    if (static_cast<long>(taps.size()) != k) {
        throw ParseError(origin + ": header declares k=" + std::to_string(k) + " but file has " +
                         std::to_string(taps.size()) + " coefficients");
    }
    return Filterd(Eigen::Map<const Signald>(taps.data(), Index(taps.size())));
}

Filterd read_filter(const fs::path& path) {
    auto in = open_in(path);
    return parse_filter(in, path.string());
}

void write_filter(std::ostream& out, const Filterd& f) {
    out << "# dtfilter v1 k=" << f.size() << '\n';
    for (Index i = 0; i < f.size(); ++i) out << format_double_sci(f[i]) << '\n';
}

void write_filter(const fs::path& path, const Filterd& f) {
    auto out = open_out(path);
    write_filter(out, f);
}

fs::path fixture_dir() {
    if (const char* env = std::getenv("DTCWT_FIXTURES"); env != nullptr && *env != '\0') {
        return fs::path(env);
    }
    return fs::path(DTCWT_DEFAULT_FIXTURE_DIR);
}

fs::path resolve_fixture(const std::string& name) {
    fs::path p(name);
    if (fs::exists(p)) return p;
    // "fixtures/x.flt" style paths are looked up relative to the fixture dir too
    for (fs::path candidate : {fixture_dir() / p, fixture_dir() / p.filename(),
                               fixture_dir() / (p.filename().string() + ".flt")}) {
        if (fs::exists(candidate)) return candidate;
    }
    throw ParseError("filter not found: " + name + " (fixture dir " + fixture_dir().string() + ")");
}

// ---------------------------------------------------------------------------
// images

namespace {

// Next whitespace-separated header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
    std::string tok;
    char c = 0;
    while (in.get(c)) {
        if (c == '#') {
            std::string skip;
            std::getline(in, skip);
            if (!tok.empty()) break;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(c);
    }
    if (tok.empty()) throw ParseError("truncated PGM header");
    return tok;
}

}  // namespace

Imaged read_pgm(const fs::path& path, PgmInfo* info) {
    auto in = open_in(path, std::ios::binary);
    const std::string magic = pgm_token(in);
    if (magic != "P5" && magic != "P2") throw ParseError(path.string() + ": not a P2/P5 PGM");
    const int w = std::stoi(pgm_token(in));
    const int h = std::stoi(pgm_token(in));
    const int maxval = std::stoi(pgm_token(in));
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) {
        throw ParseError(path.string() + ": bad PGM dimensions or maxval");
    }
    if (info) info->maxval = maxval;
    Imaged img(h, w);
    if (magic == "P2") {
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) img(r, c) = std::stod(pgm_token(in));
        }
        return img;
    }
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(static_cast<std::size_t>(w) * h * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
        throw ParseError(path.string() + ": truncated PGM raster");
    }
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::size_t i = (static_cast<std::size_t>(r) * w + c) * bytes;
            img(r, c) = bytes == 1 ? raw[i] : (raw[i] << 8) | raw[i + 1];
        }
    }
    return img;
}

void write_pgm(const fs::path& path, const Imaged& img, int maxval, bool binary) {
    if (maxval < 1 || maxval > 65535) throw OutOfRange("write_pgm: maxval must be in 1..65535");
    auto out = open_out(path, std::ios::binary);
    out << (binary ? "P5" : "P2") << '\n' << img.cols() << ' ' << img.rows() << '\n' << maxval << '\n';
    auto level = [maxval](double v) {
        return static_cast<int>(std::clamp(std::round(v), 0.0, double(maxval)));
    };
    for (Index r = 0; r < img.rows(); ++r) {
        for (Index c = 0; c < img.cols(); ++c) {
            const int v = level(img(r, c));
            if (!binary) {
                out << v << (c + 1 == img.cols() ? '\n' : ' ');
            } else if (maxval > 255) {
                out.put(static_cast<char>(v >> 8));
                out.put(static_cast<char>(v & 0xff));
            } else {
                out.put(static_cast<char>(v));
            }
        }
    }
}

void write_pgm_rescaled(const fs::path& path, const Imaged& img) {
    const double lo = img.minCoeff(), hi = img.maxCoeff();
    const Imaged scaled = hi > lo ? Imaged((img.array() - lo) * (255.0 / (hi - lo))) : Imaged(Imaged::Zero(img.rows(), img.cols()));
    write_pgm(path, scaled, 255, true);
}

Imaged read_csv(const fs::path& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        std::vector<double> row;
        for (auto field : split(t, ',')) row.push_back(parse_double(field));
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(path.string() + ": ragged CSV rows");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path.string() + ": empty CSV");
    Imaged img(Index(rows.size()), Index(rows.front().size()));
    for (Index r = 0; r < img.rows(); ++r) {
        for (Index c = 0; c < img.cols(); ++c) img(r, c) = rows[r][c];
    }
    return img;
}

void write_csv(const fs::path& path, const Imaged& img) {
    auto out = open_out(path);
    for (Index r = 0; r < img.rows(); ++r) {
        for (Index c = 0; c < img.cols(); ++c) {
            out << format_double(img(r, c)) << (c + 1 == img.cols() ? '\n' : ',');
        }
    }
}

Imaged read_image(const fs::path& path) {
    return path.extension() == ".pgm" ? read_pgm(path) : read_csv(path);
}

void write_image(const fs::path& path, const Imaged& img) {
    if (path.extension() == ".pgm") {
        write_pgm(path, img);
    } else {
        write_csv(path, img);
    }
}

void write_columns_csv(const fs::path& path, const std::vector<std::string>& names,
                       const std::vector<Signald>& columns) {
    if (names.size() != columns.size() || columns.empty()) {
        throw StructuralError("write_columns_csv: one name per column required");
    }
    auto out = open_out(path);
    for (std::size_t i = 0; i < names.size(); ++i) out << names[i] << (i + 1 == names.size() ? '\n' : ',');
    const Index n = columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != n) throw StructuralError("write_columns_csv: columns differ in length");
    }
    for (Index r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            out << format_double(columns[i][r]) << (i + 1 == columns.size() ? '\n' : ',');
        }
    }
}

// ---------------------------------------------------------------------------
// pyramids

namespace {

const char* kOrient[3] = {"h", "v", "d"};

void band_line(std::ostream& out, const std::string& label, const Imaged& b) {
    out << label << ',' << b.rows() << ',' << b.cols();
    for (Index r = 0; r < b.rows(); ++r) {
        for (Index c = 0; c < b.cols(); ++c) out << ',' << format_double(b(r, c));
    }
    out << '\n';
}

std::string tree_label(int trees, int t) {
    if (trees == 2) return "t" + std::to_string(t + 1);
    return "t" + std::to_string(t / 2 + 1) + std::to_string(t % 2 + 1);
}

std::map<std::string, Imaged> read_bands(std::istream& in) {
    std::map<std::string, Imaged> bands;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty()) continue;
        const auto f = split(t, ',');
        if (f.size() < 3) throw ParseError("pyramid: malformed band line");
        const long r = std::stol(std::string(f[1])), c = std::stol(std::string(f[2]));
        if (r < 0 || c < 0 || static_cast<long>(f.size()) != 3 + r * c) {
            throw ParseError("pyramid: band '" + std::string(f[0]) + "' has wrong value count");
        }
        Imaged b(r, c);
        for (long i = 0; i < r; ++i) {
            for (long j = 0; j < c; ++j) b(i, j) = parse_double(f[3 + i * c + j]);
        }
        if (!bands.emplace(std::string(f[0]), std::move(b)).second) {
            throw ParseError("pyramid: duplicate band '" + std::string(f[0]) + "'");
        }
    }
    return bands;
}

const Imaged& take(const std::map<std::string, Imaged>& bands, const std::string& label) {
    auto it = bands.find(label);
    if (it == bands.end()) throw ParseError("pyramid: missing band '" + label + "'");
    return it->second;
}

template <typename Pyr>
void write_dual2d(std::ostream& out, const Pyr& p) {
    constexpr int trees = Pyr::kTrees;
    out << "# pyr2d J=" << p.levels() << " H=" << p.image_rows() << " W=" << p.image_cols()
        << " trees=" << trees << '\n';
    for (int t = 0; t < trees; ++t) band_line(out, tree_label(trees, t) + ":a", p.approx[t]);
    for (int j = 1; j <= p.levels(); ++j) {
        for (int t = 0; t < trees; ++t) {
            for (int o = 0; o < 3; ++o) {
                band_line(out, tree_label(trees, t) + ":" + kOrient[o] + std::to_string(j),
                          p.details[j - 1][t][o]);
            }
        }
    }
}

template <typename Pyr>
Pyr read_dual2d(const std::map<std::string, Imaged>& bands, int levels) {
    constexpr int trees = Pyr::kTrees;
    Pyr p;
    for (int t = 0; t < trees; ++t) p.approx[t] = take(bands, tree_label(trees, t) + ":a");
    p.details.resize(levels);
    for (int j = 1; j <= levels; ++j) {
        for (int t = 0; t < trees; ++t) {
            for (int o = 0; o < 3; ++o) {
                p.details[j - 1][t][o] =
                    take(bands, tree_label(trees, t) + ":" + kOrient[o] + std::to_string(j));
            }
        }
    }
    p.validate();
    return p;
}

struct Writer {
    std::ostream& out;

    void operator()(const Pyramid1Dd& p) const {
        out << "# pyr1d J=" << p.levels() << " N=" << p.signal_length() << '\n';
        band_line(out, "a", p.approx);
        for (int j = 1; j <= p.levels(); ++j) band_line(out, "d" + std::to_string(j), p.details[j - 1]);
    }
    void operator()(const DualTreePyramid1Dd& p) const {
        out << "# pyr1d J=" << p.levels() << " N=" << (p.approx[0].size() << p.levels())
            << " trees=2\n";
        for (int t = 0; t < 2; ++t) band_line(out, tree_label(2, t) + ":a", p.approx[t]);
        for (int j = 1; j <= p.levels(); ++j) {
            for (int t = 0; t < 2; ++t) {
                band_line(out, tree_label(2, t) + ":d" + std::to_string(j), p.details[j - 1][t]);
            }
        }
    }
    void operator()(const Pyramid2Dd& p) const {
        out << "# pyr2d J=" << p.levels() << " H=" << p.image_rows() << " W=" << p.image_cols()
            << '\n';
        band_line(out, "a", p.approx);
        for (int j = 1; j <= p.levels(); ++j) {
            for (int o = 0; o < 3; ++o) {
                band_line(out, kOrient[o] + std::to_string(j), p.details[j - 1][o]);
            }
        }
    }
    void operator()(const DualTreePyramidReal2Dd& p) const { write_dual2d(out, p); }
    void operator()(const DualTreePyramidComplex2Dd& p) const { write_dual2d(out, p); }
};

}  // namespace

void write_pyramid(std::ostream& out, const AnyPyramid& p) { std::visit(Writer{out}, p); }

void write_pyramid(const fs::path& path, const AnyPyramid& p) {
    auto out = open_out(path);
    write_pyramid(out, p);
}

AnyPyramid read_pyramid(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw ParseError("pyramid: empty input");
    const bool is1d = header.rfind("# pyr1d", 0) == 0;
    const auto fields = header_fields(trim(header), is1d ? "pyr1d" : "pyr2d");
    const int levels = static_cast<int>(header_int(fields, "J"));
    const int trees = fields.count("trees") ? static_cast<int>(header_int(fields, "trees")) : 1;
    if (levels < 1) throw ParseError("pyramid: J must be >= 1");
    const auto bands = read_bands(in);

    auto as_signal = [](const Imaged& m) -> Signald {
        if (m.cols() != 1) throw ParseError("pyramid: 1D band must have one column");
        return m.col(0);
    };

    if (is1d) {
        const long n = header_int(fields, "N");
        if (trees == 1) {
            Pyramid1Dd p;
            p.approx = as_signal(take(bands, "a"));
            for (int j = 1; j <= levels; ++j) p.details.push_back(as_signal(take(bands, "d" + std::to_string(j))));
            p.validate();
            if (p.signal_length() != n) throw ParseError("pyramid: N does not match band lengths");
            return p;
        }
        if (trees != 2) throw ParseError("pyramid: 1D dual tree needs trees=2");
        DualTreePyramid1Dd p;
        for (int t = 0; t < 2; ++t) p.approx[t] = as_signal(take(bands, tree_label(2, t) + ":a"));
        for (int j = 1; j <= levels; ++j) {
            p.details.push_back({as_signal(take(bands, "t1:d" + std::to_string(j))),
                                 as_signal(take(bands, "t2:d" + std::to_string(j)))});
        }
        p.tree(0).validate();
        p.tree(1).validate();
        return p;
    }

    const long h = header_int(fields, "H"), w = header_int(fields, "W");
    auto check_shape = [&](Index rows, Index cols) {
        if (rows != h || cols != w) throw ParseError("pyramid: H/W do not match band shapes");
    };
    if (trees == 1) {
        Pyramid2Dd p;
        p.approx = take(bands, "a");
        for (int j = 1; j <= levels; ++j) {
            p.details.push_back({take(bands, "h" + std::to_string(j)), take(bands, "v" + std::to_string(j)),
                                 take(bands, "d" + std::to_string(j))});
        }
        p.validate();
        check_shape(p.image_rows(), p.image_cols());
        return p;
    }
    if (trees == 2) {
        auto p = read_dual2d<DualTreePyramidReal2Dd>(bands, levels);
        check_shape(p.image_rows(), p.image_cols());
        return p;
    }
    if (trees == 4) {
        auto p = read_dual2d<DualTreePyramidComplex2Dd>(bands, levels);
        check_shape(p.image_rows(), p.image_cols());
        return p;
    }
    throw ParseError("pyramid: trees must be 1, 2 or 4");
}

AnyPyramid read_pyramid(const fs::path& path) {
    auto in = open_in(path);
    return read_pyramid(in);
}

}  // namespace dtcwt::io
