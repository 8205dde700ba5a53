#include "stepfit/approximation.hpp"

#include <cmath>

namespace stepfit {

ApproximationResult delta_k(const SampledSignal& y, int k) {
    ApproximationResult r;
    r.best = potts::fit_k(y, k);
    r.error = std::sqrt(r.best.rss / y.size());
    return r;
}

} // namespace stepfit
