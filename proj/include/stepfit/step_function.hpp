#pragma once

// Right-continuous step functions on [0,1) and their interplay with
// sampled signals: embedding, projection onto a jump set, exact L2
// geometry on merged partitions.

#include <vector>

#include "stepfit/signal.hpp"

namespace stepfit {

// Piecewise-constant f = sum_k levels[k] * 1_[b_k, b_{k+1}) with
// b_0 = 0 < b_1 < ... < b_m < 1 = b_{m+1}.  Construction canonicalizes:
// adjacent pieces with bitwise-equal levels are merged, so every stored
// breakpoint is a genuine jump.
class StepFunction {
public:
    StepFunction(std::vector<double> breakpoints, std::vector<double> levels);

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& levels() const { return levels_; }
    int piece_count() const { return static_cast<int>(levels_.size()); }

    // Value at t in [0,1).
    double operator()(double t) const;

private:
    std::vector<double> breakpoints_;
    std::vector<double> levels_;
};

// Step function taking value u_i on [(i-1)/n, i/n).
StepFunction embed(const SampledSignal& u);
StepFunction embed(const std::vector<double>& u);

// Average of f over [I.left, I.right).
double mean_on_interval(const StepFunction& f, const Interval& I);

// Average of the embedded signal over I; I must be grid-aligned, i.e.
// n*I.left and n*I.right integral (within 1e-9 absolute).
double mean_on_interval(const SampledSignal& y, const Interval& I);

// L2-best approximation of embed(y) among step functions whose jumps lie
// in `breakpoints` (all grid-aligned): per-cell means.
StepFunction project(const SampledSignal& y, const std::vector<double>& breakpoints);

// Exact L2([0,1)) distance via the merged partition.
double l2_distance(const StepFunction& f, const StepFunction& g);

// Breakpoint locations (possibly empty).
std::vector<double> jump_set(const StepFunction& f);

// Smallest gap among consecutive points of jump_set(f) union {0, 1}.
// Equals 1 for a constant function.
double min_plateau_length(const StepFunction& f);

} // namespace stepfit
