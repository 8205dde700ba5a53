#pragma once

// Best L2 approximation of a sampled signal by step functions with a
// bounded number of grid jumps.

#include "stepfit/potts.hpp"
#include "stepfit/signal.hpp"

namespace stepfit {

struct ApproximationResult {
    double error = 0.0;        // L2([0,1)) distance of the best fit, sqrt(rss/n)
    potts::Segmentation best;  // the attaining segmentation
};

// Distance from embed(y) to the set of step functions with at most k jumps
// on the grid, 0 <= k <= n-1.  Non-increasing in k; 0 at k = n-1.
ApproximationResult delta_k(const SampledSignal& y, int k);

} // namespace stepfit
