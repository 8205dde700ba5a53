#pragma once

// Automatic penalty choice: the sigma-based log rule, the multiresolution
// residual criterion over the solution path, and the scan statistic used
// to calibrate both.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stepfit/potts.hpp"
#include "stepfit/signal.hpp"

namespace stepfit::selection {

enum class SigmaMethod { mad_diff, mean_sq_diff, fixed };

struct SigmaSpec {
    SigmaMethod method = SigmaMethod::mad_diff;
    double fixed_value = 0.0; // used only by SigmaMethod::fixed
};

enum class IntervalFamily { all, dyadic };

struct SelectionConfig {
    double c_const = 2.5;
    double delta = 0.05;
    IntervalFamily interval_family = IntervalFamily::all;
    SigmaSpec sigma = {};

    // Non-fatal configuration notes (e.g. a c_const below the regime in
    // which the log rule is understood to behave).
    std::vector<std::string> warnings() const;
};

// Noise-level estimate from first differences: mad_diff is the median of
// |y_{i+1}-y_i| rescaled for Gaussian noise (robust to a sparse set of
// jumps), mean_sq_diff the root of sum (y_{i+1}-y_i)^2 / (2(n-1)).
double estimate_sigma(const SampledSignal& y, const SigmaSpec& spec);

// Penalty gamma = c * sigma^2 * ln(n) / n.
double log_penalty(int n, double sigma, double c);

struct MrCheckResult {
    bool pass = true;
    double worst_stat = 0.0;
    int worst_i = 0; // 1-based sample range attaining worst_stat
    int worst_j = 0;
};

// Residual check of a fit: for every interval I in the family, the
// normalized residual sum |sum_{i in I} r_i| / sqrt(#I) must stay within
// `threshold`.  Reports the worst interval either way.
MrCheckResult mr_check(const SampledSignal& y, const potts::Segmentation& fit,
                       double threshold, IntervalFamily family);

struct MrSelection {
    potts::Segmentation fit;
    double gamma_hat = 0.0;      // knot at the top of the selected interval
    bool gamma_unbounded = false; // selected fit optimal for all large gamma
    bool passed = false;          // false: nothing within the budget passed
    double sigma_hat = 0.0;
    double threshold = 0.0;
    int k_selected = 0;
    double worst_stat = 0.0;
};

// Walks the solution-path thresholds from the largest downwards and keeps
// the first (largest-penalty) fit whose residuals pass mr_check with
// threshold (1+delta) * sigma_hat * sqrt(2 ln n).  The path is realized
// lazily; max_jumps (default n-1) caps how deep the walk may go.  A capped
// walk returns either a passing fit whose gamma_hat may be a chord estimate
// rather than an exact knot, or the deepest fit with passed=false.
MrSelection mr_select(const SampledSignal& y, const SelectionConfig& cfg,
                      std::optional<int> max_jumps = std::nullopt);

struct CnReport {
    double cn = 0.0;
    int arg_i = 0; // 1-based maximizing sample range
    int arg_j = 0;
};

// Scan statistic max over 1<=i<=j<=n of (xi_i+...+xi_j)^2/((j-i+1) ln n);
// for i.i.d. noise it concentrates near 2*sigma^2 and calibrates the log
// rule's constant.  Requires n >= 2.
CnReport cn_statistic(const std::vector<double>& xi);

} // namespace stepfit::selection
