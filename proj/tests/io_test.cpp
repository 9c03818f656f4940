#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <unistd.h>

#include "support.hpp"

using namespace testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("dtcwt_io_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("property: shortest double formatting round-trips bit for bit") {
    Rng rng(51);
    std::uniform_int_distribution<int> expo(-300, 300);
    for (int trial = 0; trial < 2000; ++trial) {
        const double v = std::ldexp(uniform(rng), expo(rng));
        CHECK(same_bits(io::parse_double(io::format_double(v)), v));
        CHECK(same_bits(io::parse_double(io::format_double_sci(v)), v));
    }
    for (double v : {0.0, -0.0, 1.0, std::numeric_limits<double>::denorm_min(),
                     std::numeric_limits<double>::max()}) {
        CHECK(same_bits(io::parse_double(io::format_double(v)), v));
    }
    CHECK_THROWS_AS(io::parse_double("abc"), ParseError);
    CHECK_THROWS_AS(io::parse_double("1.5x"), ParseError);
}

TEST_CASE("filter files") {
    TempDir tmp;
    SUBCASE("round trip is exact") {
        Rng rng(52);
        const Filterd f = random_filter(rng, 14);
        io::write_filter(tmp.path / "f.flt", f);
        CHECK(io::read_filter(tmp.path / "f.flt") == f);
        std::ifstream in(tmp.path / "f.flt");
        std::string header;
        std::getline(in, header);
        CHECK(header == "# dtfilter v1 k=14");
    }
    SUBCASE("malformed files") {
        std::istringstream wrong_count("# dtfilter v1 k=4\n1\n2\n");
        CHECK_THROWS_AS(io::parse_filter(wrong_count), ParseError);
        std::istringstream wrong_header("# filter k=2\n1\n2\n");
        CHECK_THROWS_AS(io::parse_filter(wrong_header), ParseError);
        std::istringstream empty("");
        CHECK_THROWS_AS(io::parse_filter(empty), ParseError);
        std::istringstream odd("# dtfilter v1 k=3\n1\n2\n3\n");
        CHECK_THROWS_AS(io::parse_filter(odd), InvalidFilter);
    }
    SUBCASE("every fixture parses and carries at least 12 significant digits") {
        for (const auto& entry : fs::directory_iterator(io::fixture_dir())) {
            if (entry.path().extension() != ".flt") continue;
            CAPTURE(entry.path().string());
            const Filterd f = io::read_filter(entry.path());
            CHECK(f.size() >= 2);
            std::ifstream in(entry.path());
            std::string line;
            std::getline(in, line);
            while (std::getline(in, line)) {
                int digits = 0;
                for (char ch : line.substr(0, line.find_first_of("eE"))) digits += std::isdigit(ch) != 0;
                CHECK(digits >= 12);
            }
        }
    }
}

TEST_CASE("fixture resolution honours the environment override") {
    TempDir tmp;
    io::write_filter(tmp.path / "custom.flt", Filterd{0.25, 0.75});
    const char* old = std::getenv("DTCWT_FIXTURES");
    const std::string saved = old ? old : "";
    ::setenv("DTCWT_FIXTURES", tmp.path.c_str(), 1);
    CHECK(io::fixture_dir() == tmp.path);
    CHECK(io::read_filter(io::resolve_fixture("custom")) == Filterd{0.25, 0.75});
    CHECK(io::read_filter(io::resolve_fixture("fixtures/custom.flt")) == Filterd{0.25, 0.75});
    CHECK_THROWS_AS(io::resolve_fixture("haar"), ParseError);
    if (old) {
        ::setenv("DTCWT_FIXTURES", saved.c_str(), 1);
    } else {
        ::unsetenv("DTCWT_FIXTURES");
    }
    CHECK(io::read_filter(io::resolve_fixture("haar")) == Filterd::haar());
}

TEST_CASE("PGM images") {
    TempDir tmp;
    Rng rng(53);
    for (int maxval : {255, 65535}) {
        for (bool binary : {true, false}) {
            CAPTURE(maxval);
            CAPTURE(binary);
            Imaged img(5, 7);
            for (Index i = 0; i < img.size(); ++i) img.data()[i] = uniform_int(rng, 0, maxval);
            const fs::path p = tmp.path / "img.pgm";
            io::write_pgm(p, img, maxval, binary);
            io::PgmInfo info;
            CHECK(io::read_pgm(p, &info) == img);
            CHECK(info.maxval == maxval);
        }
    }
    SUBCASE("values are clamped") {
        Imaged img(1, 3);
        img << -5, 3.4, 400;
        io::write_pgm(tmp.path / "c.pgm", img);
        Imaged want(1, 3);
        want << 0, 3, 255;
        CHECK(io::read_pgm(tmp.path / "c.pgm") == want);
    }
    SUBCASE("rescaled output spans the full range") {
        const Imaged img = random_image(rng, 4, 4);
        io::write_pgm_rescaled(tmp.path / "r.pgm", img);
        const Imaged back = io::read_pgm(tmp.path / "r.pgm");
        CHECK(back.minCoeff() == 0);
        CHECK(back.maxCoeff() == 255);
    }
    SUBCASE("not a PGM") {
        std::ofstream(tmp.path / "bad.pgm") << "P6\n1 1\n255\n";
        CHECK_THROWS_AS(io::read_pgm(tmp.path / "bad.pgm"), ParseError);
        std::ofstream(tmp.path / "short.pgm") << "P5\n4 4\n255\nab";
        CHECK_THROWS_AS(io::read_pgm(tmp.path / "short.pgm"), ParseError);
    }
}

TEST_CASE("CSV images round-trip exactly") {
    TempDir tmp;
    Rng rng(54);
    const Imaged img = random_image(rng, 6, 9) * 1e3;
    io::write_image(tmp.path / "x.csv", img);
    CHECK(io::read_image(tmp.path / "x.csv") == img);
    std::ofstream(tmp.path / "ragged.csv") << "1,2\n3\n";
    CHECK_THROWS_AS(io::read_csv(tmp.path / "ragged.csv"), ParseError);
}

TEST_CASE("pyramid containers round-trip exactly") {
    Rng rng(55);
    const auto fs = fixture_set("learned_complex");
    const Signald x1 = random_signal(rng, 32);
    const Imaged x2 = random_image(rng, 16, 32);

    auto round_trip = [](const io::AnyPyramid& p) {
        std::stringstream ss;
        io::write_pyramid(ss, p);
        return io::read_pyramid(ss);
    };

    SUBCASE("1D") {
        const auto p = dwt1d_forward(x1, fs.h1, 3);
        const auto q = std::get<Pyramid1Dd>(round_trip(p));
        CHECK(q.approx == p.approx);
        for (int j = 0; j < 3; ++j) CHECK(q.details[j] == p.details[j]);
        std::stringstream ss;
        io::write_pyramid(ss, p);
        std::string header;
        std::getline(ss, header);
        CHECK(header == "# pyr1d J=3 N=32");
    }
    SUBCASE("1D dual tree") {
        const auto p = dtcwt1d_forward(x1, fs, 2);
        const auto q = std::get<DualTreePyramid1Dd>(round_trip(p));
        for (int t = 0; t < 2; ++t) {
            CHECK(q.approx[t] == p.approx[t]);
            for (int j = 0; j < 2; ++j) CHECK(q.details[j][t] == p.details[j][t]);
        }
    }
    SUBCASE("2D") {
        const auto p = dwt2d_forward(x2, fs.h1, 2);
        const auto q = std::get<Pyramid2Dd>(round_trip(p));
        CHECK(q.approx == p.approx);
        for (int j = 0; j < 2; ++j) {
            for (int o = 0; o < 3; ++o) CHECK(q.details[j][o] == p.details[j][o]);
        }
    }
    SUBCASE("real and complex dual trees") {
        const auto pr = dtcwt2d_real_forward(x2, fs, 2);
        const auto qr = std::get<DualTreePyramidReal2Dd>(round_trip(pr));
        CHECK(dtcwt2d_real_inverse(qr, fs) == dtcwt2d_real_inverse(pr, fs));
        const auto pc = dtcwt2d_complex_forward(x2, fs, 2);
        const auto qc = std::get<DualTreePyramidComplex2Dd>(round_trip(pc));
        for (int t = 0; t < 4; ++t) {
            CHECK(qc.approx[t] == pc.approx[t]);
            for (int j = 0; j < 2; ++j) {
                for (int o = 0; o < 3; ++o) CHECK(qc.details[j][t][o] == pc.details[j][t][o]);
            }
        }
    }
    SUBCASE("malformed containers") {
        std::istringstream bad_header("# pyrXd J=1\n");
        CHECK_THROWS_AS(io::read_pyramid(bad_header), ParseError);
        std::istringstream missing("# pyr1d J=2 N=8\nd1,4,1,1,2,3,4\n");
        CHECK_THROWS_AS(io::read_pyramid(missing), ParseError);
    }
}
