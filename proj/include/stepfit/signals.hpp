#pragma once

// Test-signal generators on the grid x_i = i/n and additive noise models.
//
// Piecewise-constant specs are rendered as exact cell averages; the
// analytic families (including the standard Donoho-Johnstone test suite)
// are evaluated at cell midpoints (i - 1/2)/n, which keeps genuinely
// constant plateaus exactly constant and is an O(n^-2) perturbation of the
// cell average elsewhere.

#include <cstdint>
#include <vector>

#include "stepfit/signal.hpp"

namespace stepfit::signals {

enum class Family {
    blocks,
    bumps,
    heavisine,
    doppler,
    step,
    lipschitz_ramp,
    holder,
    bv_example,
};

struct SignalSpec {
    Family family = Family::step;
    // step family only:
    std::vector<double> jumps;
    std::vector<double> levels;
    // holder family only:
    double alpha = 0.5;
};

enum class NoiseFamily { gaussian, rademacher, uniform };

struct NoiseSpec {
    NoiseFamily family = NoiseFamily::gaussian;
    double sigma = 1.0;
    std::uint64_t seed = 0;

    // Sub-Gaussian tail parameter: E exp(nu*xi) <= exp(beta*nu^2) holds with
    // beta = sigma^2/2 for Gaussian draws and beta = range^2/2 for the
    // bounded families (a loose but valid Hoeffding-style constant).
    double beta() const;
};

// Clean signal of length n.
SampledSignal generate(const SignalSpec& spec, int n);

// y_i = f_i + xi_i with i.i.d. noise drawn from the counter RNG keyed by
// spec.seed; deterministic in (spec, f).
SampledSignal add_noise(const SampledSignal& f, const NoiseSpec& noise);

// Pure noise vector of length n (mean zero, sd sigma).
std::vector<double> draw_noise(int n, const NoiseSpec& noise);

// Noise level giving the requested signal-to-noise ratio
// snr = ||f||^2 / sigma^2 in L2([0,1)) norms of the embedded signal.
double sigma_for_snr(const SampledSignal& f, double snr);

} // namespace stepfit::signals
