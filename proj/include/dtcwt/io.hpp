#pragma once

// File formats:
//   filter   "# dtfilter v1 k=<len>" then one coefficient per line
//   image    PGM (P2/P5, 8 or 16 bit) or headerless CSV, one row per line
//   pyramid  "# pyr1d J=<J> N=<N>[ trees=2]" or
//            "# pyr2d J=<J> H=<H> W=<W>[ trees=<2|4>]" header, then one
//            labelled band per line: label,rows,cols,values... (row-major)

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dtcwt/dualtree.hpp"
#include "dtcwt/signal_core.hpp"
#include "dtcwt/wavelet1d.hpp"
#include "dtcwt/wavelet2d.hpp"

namespace dtcwt::io {

namespace fs = std::filesystem;

/// Shortest text that parses back to exactly `v`.
std::string format_double(double v);
/// Scientific notation with 17 significant digits.
std::string format_double_sci(double v);
double parse_double(std::string_view s);

Filterd read_filter(const fs::path& path);
Filterd parse_filter(std::istream& in, const std::string& origin = "<stream>");
void write_filter(const fs::path& path, const Filterd& f);
void write_filter(std::ostream& out, const Filterd& f);

/// Fixture directory: $DTCWT_FIXTURES when set, otherwise the compiled-in
/// default.
fs::path fixture_dir();
/// Resolves a bare fixture name ("haar", "learned_complex_h.flt") or a path.
fs::path resolve_fixture(const std::string& name_or_path);

struct PgmInfo {
    int maxval = 255;
};

Imaged read_pgm(const fs::path& path, PgmInfo* info = nullptr);
/// Values are rounded and clamped to [0, maxval].
void write_pgm(const fs::path& path, const Imaged& img, int maxval = 255, bool binary = true);
/// Affine rescale of [min, max] onto [0, 255] before writing. Constant
/// images map to 0.
void write_pgm_rescaled(const fs::path& path, const Imaged& img);

Imaged read_csv(const fs::path& path);
void write_csv(const fs::path& path, const Imaged& img);
/// PGM for .pgm extension, CSV otherwise.
Imaged read_image(const fs::path& path);
void write_image(const fs::path& path, const Imaged& img);

/// Columns of equal length written side by side with a header line.
void write_columns_csv(const fs::path& path, const std::vector<std::string>& names,
                       const std::vector<Signald>& columns);

using AnyPyramid = std::variant<Pyramid1Dd, DualTreePyramid1Dd, Pyramid2Dd,
                                DualTreePyramidReal2Dd, DualTreePyramidComplex2Dd>;

void write_pyramid(std::ostream& out, const AnyPyramid& p);
void write_pyramid(const fs::path& path, const AnyPyramid& p);
AnyPyramid read_pyramid(std::istream& in);
AnyPyramid read_pyramid(const fs::path& path);

}  // namespace dtcwt::io
