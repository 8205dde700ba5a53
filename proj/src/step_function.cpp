#include "stepfit/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stepfit {

namespace {

bool finite(double v) { return std::isfinite(v); }

// Grid index of a grid-aligned coordinate t (t*n integral within 1e-9).
long grid_index(double t, int n, const char* what) {
    const double scaled = t * n;
    const double rounded = std::nearbyint(scaled);
    if (std::fabs(scaled - rounded) > 1e-9)
        throw std::invalid_argument(std::string(what) + ": coordinate " +
                                    std::to_string(t) + " is not a multiple of 1/n");
    return static_cast<long>(rounded);
}

} // namespace

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> levels)
    : breakpoints_(std::move(breakpoints)), levels_(std::move(levels)) {
    if (levels_.size() != breakpoints_.size() + 1)
        throw std::invalid_argument("StepFunction: need #levels == #breakpoints + 1");
    for (double b : breakpoints_)
        if (!finite(b) || !(b > 0.0) || !(b < 1.0))
            throw std::invalid_argument("StepFunction: breakpoints must lie in (0,1)");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i)
        if (!(breakpoints_[i - 1] < breakpoints_[i]))
            throw std::invalid_argument("StepFunction: breakpoints must be strictly increasing");
    for (double v : levels_)
        if (!finite(v))
            throw std::invalid_argument("StepFunction: non-finite level");

    // Canonical form: drop breakpoints whose two sides carry the same level.
    std::vector<double> bp;
    std::vector<double> lv;
    lv.push_back(levels_[0]);
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (levels_[i + 1] == lv.back())
            continue;
        bp.push_back(breakpoints_[i]);
        lv.push_back(levels_[i + 1]);
    }
    breakpoints_ = std::move(bp);
    levels_ = std::move(lv);
}

double StepFunction::operator()(double t) const {
    if (!(t >= 0.0) || !(t < 1.0))
        throw std::invalid_argument("StepFunction: argument outside [0,1)");
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    return levels_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

StepFunction embed(const std::vector<double>& u) {
    return embed(SampledSignal(u));
}

StepFunction embed(const SampledSignal& u) {
    const int n = u.size();
    std::vector<double> bp;
    std::vector<double> lv;
    lv.push_back(u[1]);
    for (int i = 2; i <= n; ++i) {
        if (u[i] != u[i - 1]) {
            bp.push_back(static_cast<double>(i - 1) / n);
            lv.push_back(u[i]);
        }
    }
    return StepFunction(std::move(bp), std::move(lv));
}

double mean_on_interval(const StepFunction& f, const Interval& I) {
    const auto& bp = f.breakpoints();
    const auto& lv = f.levels();
    long double acc = 0.0L;
    double lo = I.left;
    // Piece index containing lo.
    std::size_t k = static_cast<std::size_t>(
        std::upper_bound(bp.begin(), bp.end(), lo) - bp.begin());
    while (lo < I.right) {
        const double hi = (k < bp.size() && bp[k] < I.right) ? bp[k] : I.right;
        acc += static_cast<long double>(lv[k]) * (hi - lo);
        lo = hi;
        ++k;
    }
    return static_cast<double>(acc / I.length());
}

double mean_on_interval(const SampledSignal& y, const Interval& I) {
    const int n = y.size();
    const long a = grid_index(I.left, n, "mean_on_interval");
    const long b = grid_index(I.right, n, "mean_on_interval");
    long double acc = 0.0L;
    for (long i = a + 1; i <= b; ++i)
        acc += y[static_cast<int>(i)];
    return static_cast<double>(acc / static_cast<long double>(b - a));
}

StepFunction project(const SampledSignal& y, const std::vector<double>& breakpoints) {
    const int n = y.size();
    std::vector<long> cuts;
    cuts.push_back(0);
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (i > 0 && !(breakpoints[i - 1] < breakpoints[i]))
            throw std::invalid_argument("project: breakpoints must be strictly increasing");
        const double b = breakpoints[i];
        if (!(b > 0.0) || !(b < 1.0))
            throw std::invalid_argument("project: breakpoints must lie in (0,1)");
        cuts.push_back(grid_index(b, n, "project"));
    }
    cuts.push_back(n);

    std::vector<double> lv;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        long double acc = 0.0L;
        for (long i = cuts[s] + 1; i <= cuts[s + 1]; ++i)
            acc += y[static_cast<int>(i)];
        lv.push_back(static_cast<double>(acc / static_cast<long double>(cuts[s + 1] - cuts[s])));
    }
    return StepFunction(breakpoints, std::move(lv));
}

double l2_distance(const StepFunction& f, const StepFunction& g) {
    const auto& bf = f.breakpoints();
    const auto& bg = g.breakpoints();
    long double acc = 0.0L;
    double lo = 0.0;
    std::size_t i = 0, j = 0;
    while (lo < 1.0) {
        const double nf = (i < bf.size()) ? bf[i] : 1.0;
        const double ng = (j < bg.size()) ? bg[j] : 1.0;
        const double hi = std::min(nf, ng);
        const double d = f.levels()[i] - g.levels()[j];
        acc += static_cast<long double>(d) * d * (hi - lo);
        if (nf == hi && i < bf.size()) ++i;
        if (ng == hi && j < bg.size()) ++j;
        lo = hi;
    }
    return std::sqrt(static_cast<double>(acc));
}

std::vector<double> jump_set(const StepFunction& f) {
    return f.breakpoints();
}

double min_plateau_length(const StepFunction& f) {
    const auto& bp = f.breakpoints();
    double best = 1.0;
    double prev = 0.0;
    for (double b : bp) {
        best = std::min(best, b - prev);
        prev = b;
    }
    best = std::min(best, 1.0 - prev);
    return best;
}

} // namespace stepfit
