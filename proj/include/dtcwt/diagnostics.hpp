#pragma once

// Analytic test scenes and the measurements run on them: shift variance,
// quantization artifacts, single-level reconstruction of oriented edges,
// filter similarity and orientation purity.

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dtcwt/dualtree.hpp"
#include "dtcwt/learn/loss.hpp"
#include "dtcwt/wavelet1d.hpp"
#include "dtcwt/wavelet2d.hpp"

namespace dtcwt {

struct DiagnosticReport {
    std::string name;
    std::string status = "ok";  // "degenerate" when a metric is undefined for the input
    std::map<std::string, double> metrics;
    std::vector<std::filesystem::path> artifacts;

    double metric(const std::string& key) const;
    /// key = value lines, then one "artifact = path" line per emitted file.
    std::string to_text() const;
    void write(const std::filesystem::path& path) const;
};

/// True within `radius` samples (circularly) of any listed discontinuity.
struct EdgeMask {
    Eigen::Array<bool, Eigen::Dynamic, 1> near;

    static EdgeMask around(Index n, const std::vector<Index>& edges, Index radius);
    Signald off_edge() const { return (!near).cast<double>().matrix(); }
};

/// 0 before `edge`, 1 from `edge` on.
Signald step_edge_signal(Index n, Index edge);

struct ShiftVarianceOptions {
    Index length = 256;
    Index edge = 131;
    Index shift = 1;
    double amplitude = 1.0;  // 0 gives the degenerate zero signal
    std::filesystem::path out_dir;  // empty: no CSV output
};

/// delta = ||c_shift - c|| / ||c|| for level-`level` DWT details and DTCWT
/// magnitudes. Before comparing, c is rolled by the whole number of
/// coefficients closest to shift / 2^level.
DiagnosticReport diag_shift_variance(const DualTreeFilterSetd& fs, const Filterd& filter,
                                     int level, const ShiftVarianceOptions& opt = {});

struct AliasingScene {
    Signald signal;
    std::vector<Index> edges;
};

/// Slow sinusoid with three steps, 256 samples.
AliasingScene aliasing_scene(Index n = 256);

/// Quantizes the signal (A) and, separately, every band of a `levels`-level
/// DWT and DTCWT before inverting (B). Reports ||(B - A)(1 - mask)||^2 for
/// both transforms; qlevels == 0 skips quantization.
DiagnosticReport diag_aliasing(const DualTreeFilterSetd& fs, const Filterd& filter, int levels = 1,
                               int qlevels = 9, const std::filesystem::path& out_dir = {});

/// Straight edge from `a` to `b` in (row, col) pixel coordinates; the metric
/// uses the middle half of it.
struct EdgeSegment {
    std::string name;
    double r0, c0, r1, c1;
};

struct EdgeScene {
    Imaged image;
    std::vector<EdgeSegment> edges;
};

/// Right triangle (horizontal, vertical and diagonal edges) plus a disk.
EdgeScene edge_scene(Index size = 256);

/// Within `halfwidth` of the middle half of the edge, pixels are binned by
/// signed distance to the edge line; returns the energy of deviations from
/// the bin means relative to the total energy (0 for an all-zero region).
double edge_artifact(const Imaged& recon, const EdgeSegment& e, double halfwidth = 6.0);

/// Single-level reconstructions of `scene` from the 2D DWT and the DTCWT
/// with the artifact metric of every edge.
DiagnosticReport diag_band_reconstruction(const DualTreeFilterSetd& fs, const Filterd& filter,
                                          const EdgeScene& scene, int level = 4,
                                          Variant v = Variant::Complex,
                                          const std::filesystem::path& out_dir = {});

/// 1 - max over circular shifts, signs and reversal of the normalized inner
/// product; the shorter filter is zero padded. Throws NumericError on a zero
/// filter.
double compare_filters(const Signald& f, const Signald& ref);
inline double compare_filters(const Filterd& f, const Filterd& ref) {
    return compare_filters(f.taps(), ref.taps());
}

struct Orientation2D {
    double angle;   // radians in [0, pi), 0 along the column axis
    double purity;  // (l_max - l_min) / (l_max + l_min)
};

/// Principal axis of the second-moment matrix of a nonnegative image about
/// its centroid. Throws NumericError for an all-zero image.
Orientation2D orientation_purity(const Imaged& m);

struct DirectionalityResult {
    std::array<Orientation2D, 6> bands;
    int distinct_angles = 0;
    double min_purity = 0;
};

/// Size of the largest subset of `angles` whose members are pairwise at least
/// `min_separation` apart, measured circularly on [0, pi).
int count_distinct_angles(const std::vector<double>& angles, double min_separation);

/// Orientation of the six impulse-response magnitudes at `scale`.
DirectionalityResult directionality(const DualTreeFilterSetd& fs, int scale,
                                    Variant v = Variant::Complex,
                                    double min_separation_deg = 20.0);

}  // namespace dtcwt
