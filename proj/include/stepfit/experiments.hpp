#pragma once

// Monte Carlo harness: convergence-rate slopes, jump recovery, the
// four-signal reconstruction bundle, and the noise scan statistic.  Every
// experiment is fully determined by its config and base seed; replicate
// r at grid index i draws noise with seed base_seed ^ (i << 32) ^ r.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stepfit/potts.hpp"
#include "stepfit/selection.hpp"
#include "stepfit/signal.hpp"
#include "stepfit/signals.hpp"

namespace stepfit::experiments {

enum class PenaltyRule { log_rule, mr, fixed };
enum class RateMetric { l2, hausdorff, skorokhod, jump_count };

struct PenaltySpec {
    PenaltyRule rule = PenaltyRule::log_rule;
    double c_const = 2.5;     // log_rule
    double delta = 0.05;      // mr
    double fixed_gamma = 0.0; // fixed
    selection::SigmaSpec sigma = {};
};

struct RateExperimentConfig {
    signals::SignalSpec signal;
    std::vector<int> n_grid; // strictly increasing
    int replicates = 1;
    // Noise level: explicit sd when `sigma` is set, else derived per n
    // from the target signal-to-noise ratio ||f||^2 / sigma^2.
    double snr = 7.0;
    std::optional<double> sigma;
    signals::NoiseFamily noise = signals::NoiseFamily::gaussian;
    PenaltySpec penalty = {};
    RateMetric metric = RateMetric::l2;
    std::uint64_t base_seed = 0;
    int threads = 1;
};

// Per-fit callback, e.g. for spot-checking minimizer invariants.  A set
// observer forces serial execution regardless of `threads`.
struct FitObservation {
    int n = 0;
    int replicate = 0;
    std::uint64_t seed = 0;
    double gamma = 0.0; // +inf when the constant fit is optimal at all penalties
    const SampledSignal& y;
    const potts::Segmentation& fit;
};
using FitObserver = std::function<void(const FitObservation&)>;

struct RateRow {
    int n = 0;
    int replicate = 0;
    std::uint64_t seed = 0;
    double sigma = 0.0;
    double sigma_hat = 0.0;
    double gamma = 0.0;
    int jump_count = 0;
    double value = 0.0; // the configured metric against the clean embed
};

struct RatePoint {
    int n = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

struct RateResult {
    std::vector<RateRow> rows; // ordered by (n index, replicate)
    std::vector<RatePoint> points;
    // Least-squares line through (ln n, ln mean); undefined (and zero)
    // when any mean vanishes, as in noise-free runs.
    double slope = 0.0;
    double intercept = 0.0;
    bool slope_defined = false;
};

// For each n and replicate: clean signal, noise at the configured level,
// penalty by rule, exact fit, metric against the clean embedded signal.
RateResult run_rate(const RateExperimentConfig& cfg, const FitObserver& observer = {});

struct RecoveryRow {
    int n = 0;
    int replicate = 0;
    std::uint64_t seed = 0;
    int jump_count = 0;
    bool match = false;      // jump count equals the clean embed's
    double hausdorff = 0.0;  // jump-set distance to the clean embed
};

struct RecoveryPoint {
    int n = 0;
    double match_fraction = 0.0;
    // Means over matched replicates only; NaN when none matched.
    double mean_hausdorff = 0.0;
    double mean_scaled_hausdorff = 0.0; // n * hausdorff
};

struct RecoveryResult {
    std::vector<RecoveryRow> rows;
    std::vector<RecoveryPoint> points;
};

// Jump recovery for piecewise-constant truths (step and blocks families);
// the metric field of cfg is ignored.
RecoveryResult run_recovery(const RateExperimentConfig& cfg, const FitObserver& observer = {});

struct Figure1Cell {
    std::string family;
    double snr = 0.0;
    int n = 0;
    std::uint64_t seed = 0;
    double sigma = 0.0;
    double sigma_hat = 0.0;
    double gamma = 0.0;
    std::vector<double> clean;
    std::vector<double> noisy;
    potts::Segmentation fit;
};

// The standard four-signal reconstruction bundle: blocks, bumps,
// heavisine, doppler at n = 2048 and signal-to-noise ratios 7, 4, 1,
// fitted with the log-rule penalty (C = 2.5, robust sigma estimate).
// Cell c draws noise with seed `seed ^ (c << 32)`.
std::vector<Figure1Cell> run_figure1(std::uint64_t seed);

struct CnConfig {
    std::vector<int> n_grid;
    int replicates = 50;
    signals::NoiseFamily noise = signals::NoiseFamily::gaussian;
    double sigma = 1.0;
    std::uint64_t base_seed = 0;
    int threads = 1;
};

struct CnRow {
    int n = 0;
    int replicate = 0;
    std::uint64_t seed = 0;
    double cn = 0.0;
};

struct CnPoint {
    int n = 0;
    double mean = 0.0;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
};

struct CnResult {
    std::vector<CnRow> rows;
    std::vector<CnPoint> points;
};

// Distribution of the scan statistic over pure-noise draws.
CnResult run_cn(const CnConfig& cfg);

} // namespace stepfit::experiments
