#pragma once

// Exact least-squares segmentation of a sampled signal under an L0 jump
// penalty: minimize (1/n) * sum_i (u_i - y_i)^2 + gamma * #jumps(u) over
// all piecewise-constant u.  The scaled objective RSS + (n*gamma)*#jumps
// is minimized by dynamic programming over segment boundaries; gamma is
// converted to the per-segment penalty lambda = n*gamma in exactly one
// place (fit_gamma).
//
// Tie policy everywhere: smaller objective first, then fewer jumps, then
// the lexicographically smallest jump index sequence.  All comparisons are
// exact floating-point comparisons on identically computed quantities, so
// the DP and the exhaustive reference minimizer agree bit for bit.

#include <optional>
#include <vector>

#include "stepfit/signal.hpp"
#include "stepfit/step_function.hpp"

namespace stepfit::potts {

// Prefix sums of y and y^2 accumulated in the widest float format, giving
// O(1) segment residuals.
class PrefixMoments {
public:
    explicit PrefixMoments(const SampledSignal& y);

    int n() const { return n_; }
    // Sum of y_i over i..j (1-based, inclusive).
    long double sum(int i, int j) const { return cum_[j] - cum_[i - 1]; }
    long double sum_sq(int i, int j) const { return cumsq_[j] - cumsq_[i - 1]; }
    double mean(int i, int j) const {
        return static_cast<double>(sum(i, j) / static_cast<long double>(j - i + 1));
    }

private:
    int n_;
    std::vector<long double> cum_;
    std::vector<long double> cumsq_;
};

// Residual sum of squares of the best constant fit on samples i..j:
// sum y^2 - (sum y)^2 / (j-i+1).  Always >= 0; exactly 0 for singletons.
long double segment_cost(const PrefixMoments& m, int i, int j);

// A fitted segmentation of y_1..y_n.  jumps[k] = j means the fit changes
// level between samples j and j+1 (1 <= j <= n-1); levels are the exact
// per-segment means, one more than there are jumps.
struct Segmentation {
    int n = 0;
    std::vector<int> jumps;
    std::vector<double> levels;
    double rss = 0.0;
    std::optional<double> gamma;   // penalty the fit was produced with
    std::optional<double> h_value; // rss/n + gamma * #jumps

    int jump_count() const { return static_cast<int>(jumps.size()); }
    // Fitted value at sample i (1-based).
    double value_at(int i) const;
    std::vector<double> fitted_values() const;
};

// Gamma thresholds of the solution path: `k` is the optimal jump count for
// penalties in [gamma_low, gamma_high); the topmost interval is unbounded
// and the bottom one reaches down to 0.
struct PathKnot {
    double gamma = 0.0; // upper end of the interval on which `k` is optimal
    int k = 0;
};

// rss[k] and jumps[k] for every jump budget k = 0..k_max, plus the hull
// thresholds.  rss is non-increasing; only hull counts appear as knots.
struct SolutionPath {
    int n = 0;
    std::vector<double> rss;              // indexed by k
    std::vector<std::vector<int>> jumps;  // indexed by k
    std::vector<PathKnot> knots;          // gamma strictly decreasing

    int k_max() const { return static_cast<int>(rss.size()) - 1; }
    // Jump count fit_gamma would return at penalty gamma > 0.  Exact on a
    // full path (k_max = n-1); a truncated path distorts the hull near its
    // right edge, so small penalties then report truncation artifacts.
    int k_at(double gamma) const;
};

// Continuum form of a fitted segmentation: level levels[k] on
// [jumps[k-1]/n, jumps[k]/n).
StepFunction to_step_function(const Segmentation& s);

// Best fit with at most k jumps; returns the fewest-jump representative
// when a smaller budget already attains the same residual.
Segmentation fit_k(const SampledSignal& y, int k);

// Exact minimizer of the penalized objective, gamma > 0.
Segmentation fit_gamma(const SampledSignal& y, double gamma);

// All budgets 0..k_max in one pass (layered DP), 1 <= k_max <= n-1.
SolutionPath solve_path(const SampledSignal& y, int k_max);

// Exhaustive minimizer over all 2^(n-1) jump patterns; refuses n > 20.
// Reference implementation for tests.
Segmentation brute_force_fit(const SampledSignal& y, double gamma);

// A-priori inequalities every exact minimizer satisfies, checked with
// additive slack `tol`; returns a human-readable violation description or
// nullopt when the fit passes.  Scans: (a) each adjacent segment pair
// (I, I'): gamma <= |I||I'|/(n(|I|+|I'|)) * (mean_I - mean_I')^2, (b) each
// sub-run I' of each segment with level a: 2*gamma >= (|I'|/n) *
// (mean_I'(y) - a)^2, (c) runs adjoining each jump from the right, with
// left level a and right level b: (b-a) * (mean_I'(y) - (a+b)/2) >= 0.
std::optional<std::string> check_minimizer_inequalities(const SampledSignal& y,
                                                        double gamma,
                                                        const Segmentation& fit,
                                                        double tol);

// Incremental layered DP over exact segment counts, suffix-oriented so the
// reconstruction realizes the lexicographic tie rule.  Layer s holds the
// best split of y into exactly s segments.
class LayeredDp {
public:
    explicit LayeredDp(const SampledSignal& y);

    const PrefixMoments& moments() const { return moments_; }
    int n() const { return moments_.n(); }
    int layers() const { return static_cast<int>(layer_value_.size()); }

    // Ensure layers 1..s_max exist (s_max <= n).
    void extend_to(int s_max);

    // Objective value E[s][1] as accumulated by the DP.
    long double layer_objective(int s) const { return layer_value_[s - 1]; }

    // Best budget-k fit: smallest layer s <= k+1 attaining min E[s][1].
    Segmentation fit_for_budget(int k) const;

    // rss (recomputed left to right) of fit_for_budget(k).
    double budget_rss(int k) const;

private:
    std::vector<int> reconstruct(int s) const;

    PrefixMoments moments_;
    std::vector<long double> prev_;               // E[s-1][i] rolling layer
    std::vector<std::vector<int>> choice_;        // choice_[s-1][i] = first segment end
    std::vector<long double> layer_value_;        // E[s][1]
};

} // namespace stepfit::potts
