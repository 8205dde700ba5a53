#pragma once

// Distances between step functions and between their jump sets: Hausdorff
// distance on jump locations, uniform distance, and a Skorokhod-type
// distance that trades uniform error against time warping.

#include <utility>
#include <vector>

#include "stepfit/step_function.hpp"

namespace stepfit::metrics {

// Sorted, deduplicated jump locations in (0,1).
class JumpSet {
public:
    JumpSet() = default;
    explicit JumpSet(std::vector<double> points);

    const std::vector<double>& points() const { return points_; }
    bool empty() const { return points_.empty(); }

private:
    std::vector<double> points_;
};

// Two-sided Hausdorff distance between jump sets.  Conventions: 0 when
// both sets are empty, 1 when exactly one is.
double hausdorff(const JumpSet& a, const JumpSet& b);

// Uniform distance sup_t |f(t) - g(t)| over [0,1).
double sup_distance(const StepFunction& f, const StepFunction& g);

struct SkorokhodResult {
    double distance = 0.0;
    double time_term = 0.0;  // max |log chord slope| of the warp
    double level_term = 0.0; // uniform error under the warp
    // Matched jump position pairs (position in f, position in g).
    std::vector<std::pair<double, double>> matching;
};

// Skorokhod J1-type distance: minimize over order-preserving partial
// matchings of the two jump sets the larger of
//   - the warp cost: max |log(dt_f / dt_g)| over chords between consecutive
//     matched pairs (endpoints (0,0) and (1,1) always anchor the warp), and
//   - the uniform error of f warped piecewise linearly through the matched
//     pairs against g.
// Unmatched jumps stay where the linear chord places them, so their level
// mismatch is charged against the opposite function's running level.
SkorokhodResult skorokhod(const StepFunction& f, const StepFunction& g);

} // namespace stepfit::metrics
