#pragma once

#include <vector>

#include "dtcwt/dualtree.hpp"
#include "dtcwt/learn/network.hpp"
#include "dtcwt/learn/tape.hpp"

namespace dtcwt::learn {

struct LossWeights {
    double lambda1 = 0.1;   // sparsity
    double lambda2 = 1.0;   // filter constraint
    double lambda3 = 4e-4;  // Gaussian impulse response

    /// Published settings; lambda3 is 4e-5 for the real network and 4e-4 for the complex one.
    static LossWeights defaults(Variant v) {
        return LossWeights{0.1, 1.0, v == Variant::Real ? 4e-5 : 4e-4};
    }
    void validate() const;
};

/// G(i,j) = alpha * exp(-((i-c)^2 + (j-c)^2) / (2 sigma^2)), c = (size-1)/2.
struct GaussianTarget {
    double alpha = 0.02;
    double sigma = 10.0;
    int size = 0;

    double center() const { return 0.5 * (size - 1); }
    Imaged matrix() const;
};

struct LossReport {
    double reconstruction = 0;  // batch mean of ||x - x_hat||^2
    double sparsity = 0;        // batch mean of the summed L1 norms of all detail bands
    double constraint = 0;      // L_w(h1) + L_w(h1_first)
    double gaussian = 0;        // L_g
    double total = 0;
};

/// Everything a loss evaluation needs besides the data and the filters.
struct LossSetup {
    Variant variant = Variant::Complex;
    int levels = 4;
    int impulse_scale = 4;
    LossWeights weights;
    GaussianTarget target;
};

/// (||h|| - 1)^2 + (mean(h) - sqrt2/k)^2 + mean(g)^2 with g the QMF of h.
double loss_wavelet_constraint(const Filterd& h);

/// Side length of the impulse-response image at `scale`: k * 2^scale,
/// clipped to `max_size` when positive.
int impulse_size(int filter_length, int scale, int max_size = 0);

struct ImpulseResponse {
    Imaged real;
    Imaged imag;  // empty for the real variant

    /// real^2 + imag^2
    Imaged magnitude() const;
};

/// Synthesis of a pyramid holding a single unit coefficient at the centre of
/// band `band` (1..6) of level `scale`, on a size x size image.
ImpulseResponse impulse_response(const DualTreeFilterSetd& fs, int band, int scale, Variant v,
                                 int size);

/// sum over the six bands of ||G - M_band||^2.
double loss_gaussian_impulse(const DualTreeFilterSetd& fs, const GaussianTarget& target,
                             int scale, Variant v);

/// Loss of a batch, computed with the plain (non-recording) transforms.
LossReport total_loss(const std::vector<Imaged>& batch, const DualTreeFilterSetd& fs,
                      const LossSetup& setup);

struct LossGradient {
    LossReport report;
    Signald d_h1;
    Signald d_h1_first;
};

/// Same loss evaluated on tapes, with exact reverse-mode gradients.
/// Images are evaluated on separate tapes, `threads` at a time, and their
/// gradients summed in batch order.
LossGradient loss_and_gradient(const std::vector<Imaged>& batch, const DualTreeFilterSetd& fs,
                               const LossSetup& setup, int threads = 1);

// Tape-level building blocks, exposed for gradient tests.
Var record_wavelet_constraint(Tape& t, Var h);
Var record_impulse_magnitude(Tape& t, const TapeFilters& f, int band, int scale, Variant v,
                             int size);
Var record_gaussian_loss(Tape& t, const TapeFilters& f, const GaussianTarget& target, int scale,
                         Variant v);
/// (||x - x_hat||^2, sum of detail L1 norms) for one image.
std::pair<Var, Var> record_image_terms(Tape& t, const TapeFilters& f, const Imaged& x, Variant v,
                                       int levels);

}  // namespace dtcwt::learn
