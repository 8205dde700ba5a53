#include "stepfit/potts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace stepfit::potts {

namespace {

constexpr long double kInf = std::numeric_limits<long double>::infinity();

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// Left-to-right residual sum of a fixed partition; boundary list holds the
// last sample of every segment, ending with n.
long double partition_rss(const PrefixMoments& m, const std::vector<int>& ends) {
    long double acc = 0.0L;
    int start = 1;
    for (int e : ends) {
        acc += segment_cost(m, start, e);
        start = e + 1;
    }
    return acc;
}

Segmentation build_segmentation(const PrefixMoments& m, const std::vector<int>& ends) {
    Segmentation s;
    s.n = m.n();
    int start = 1;
    for (int e : ends) {
        s.levels.push_back(m.mean(start, e));
        if (e < m.n()) s.jumps.push_back(e);
        start = e + 1;
    }
    s.rss = static_cast<double>(partition_rss(m, ends));
    return s;
}

} // namespace

PrefixMoments::PrefixMoments(const SampledSignal& y) : n_(y.size()) {
    cum_.assign(static_cast<std::size_t>(n_) + 1, 0.0L);
    cumsq_.assign(static_cast<std::size_t>(n_) + 1, 0.0L);
    for (int i = 1; i <= n_; ++i) {
        const long double v = y[i];
        cum_[i] = cum_[i - 1] + v;
        cumsq_[i] = cumsq_[i - 1] + v * v;
    }
}

long double segment_cost(const PrefixMoments& m, int i, int j) {
    require(1 <= i && i <= j && j <= m.n(), "segment_cost: need 1 <= i <= j <= n");
    if (i == j) return 0.0L;
    const long double s = m.sum(i, j);
    const long double c = m.sum_sq(i, j) - s * s / static_cast<long double>(j - i + 1);
    return c > 0.0L ? c : 0.0L;
}

double Segmentation::value_at(int i) const {
    const auto it = std::lower_bound(jumps.begin(), jumps.end(), i);
    return levels[static_cast<std::size_t>(it - jumps.begin())];
}

std::vector<double> Segmentation::fitted_values() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    int seg = 0;
    for (int i = 1; i <= n; ++i) {
        out.push_back(levels[static_cast<std::size_t>(seg)]);
        if (seg < jump_count() && i == jumps[static_cast<std::size_t>(seg)]) ++seg;
    }
    return out;
}

int SolutionPath::k_at(double gamma) const {
    require(gamma > 0.0, "SolutionPath::k_at: gamma must be positive");
    int k = 0;
    for (const PathKnot& kn : knots) {
        if (gamma < kn.gamma)
            k = kn.k;
        else
            break;
    }
    return k;
}

LayeredDp::LayeredDp(const SampledSignal& y) : moments_(y) {}

void LayeredDp::extend_to(int s_max) {
    const int n = moments_.n();
    require(1 <= s_max && s_max <= n, "LayeredDp: segment count out of range");
    std::vector<long double> cur(static_cast<std::size_t>(n) + 2, kInf);
    while (layers() < s_max) {
        const int s = layers() + 1;
        std::vector<int> ch(static_cast<std::size_t>(n) + 2, 0);
        if (s == 1) {
            prev_.assign(static_cast<std::size_t>(n) + 2, kInf);
            for (int i = n; i >= 1; --i) {
                prev_[i] = segment_cost(moments_, i, n);
                ch[i] = n;
            }
            layer_value_.push_back(prev_[1]);
            choice_.push_back(std::move(ch));
            continue;
        }
        const int last_start = n - s + 1;
        std::fill(cur.begin(), cur.end(), kInf);
        for (int i = last_start; i >= 1; --i) {
            const long double si = moments_.sum(1, i - 1);
            const long double qi = moments_.sum_sq(1, i - 1);
            long double best = kInf;
            int best_e = 0;
            for (int e = i; e <= last_start; ++e) {
                // segment_cost(moments_, i, e) with the i-side sums hoisted
                long double c;
                if (e == i) {
                    c = 0.0L;
                } else {
                    const long double ds = moments_.sum(1, e) - si;
                    c = moments_.sum_sq(1, e) - qi -
                        ds * ds / static_cast<long double>(e - i + 1);
                    if (c < 0.0L) c = 0.0L;
                }
                const long double v = c + prev_[e + 1];
                if (v < best) {
                    best = v;
                    best_e = e;
                }
            }
            cur[i] = best;
            ch[i] = best_e;
        }
        prev_.swap(cur);
        layer_value_.push_back(prev_[1]);
        choice_.push_back(std::move(ch));
    }
}

std::vector<int> LayeredDp::reconstruct(int s) const {
    std::vector<int> ends;
    int i = 1;
    for (int layer = s; layer >= 1; --layer) {
        const int e = choice_[static_cast<std::size_t>(layer - 1)][static_cast<std::size_t>(i)];
        ends.push_back(e);
        i = e + 1;
    }
    return ends;
}

Segmentation LayeredDp::fit_for_budget(int k) const {
    require(0 <= k && k + 1 <= layers(), "LayeredDp: budget beyond computed layers");
    int best_s = 1;
    for (int s = 2; s <= k + 1; ++s)
        if (layer_value_[static_cast<std::size_t>(s - 1)] <
            layer_value_[static_cast<std::size_t>(best_s - 1)])
            best_s = s;
    return build_segmentation(moments_, reconstruct(best_s));
}

double LayeredDp::budget_rss(int k) const {
    return fit_for_budget(k).rss;
}

StepFunction to_step_function(const Segmentation& s) {
    std::vector<double> breakpoints;
    breakpoints.reserve(s.jumps.size());
    for (int j : s.jumps) {
        breakpoints.push_back(static_cast<double>(j) / s.n);
    }
    return StepFunction(std::move(breakpoints), s.levels);
}

Segmentation fit_k(const SampledSignal& y, int k) {
    require(0 <= k && k <= y.size() - 1, "fit_k: need 0 <= k <= n-1");
    LayeredDp dp(y);
    dp.extend_to(k + 1);
    return dp.fit_for_budget(k);
}

Segmentation fit_gamma(const SampledSignal& y, double gamma) {
    require(std::isfinite(gamma) && gamma > 0.0, "fit_gamma: gamma must be positive and finite");
    const int n = y.size();
    const PrefixMoments m(y);
    const long double lambda = static_cast<long double>(n) * gamma;

    std::vector<long double> value(static_cast<std::size_t>(n) + 2, 0.0L);
    std::vector<int> segs(static_cast<std::size_t>(n) + 2, 0);
    std::vector<int> pick(static_cast<std::size_t>(n) + 2, 0);
    for (int i = n; i >= 1; --i) {
        const long double si = m.sum(1, i - 1);
        const long double qi = m.sum_sq(1, i - 1);
        long double best = kInf;
        int best_segs = 0;
        int best_e = 0;
        for (int e = i; e <= n; ++e) {
            long double c;
            if (e == i) {
                c = 0.0L;
            } else {
                const long double ds = m.sum(1, e) - si;
                c = m.sum_sq(1, e) - qi - ds * ds / static_cast<long double>(e - i + 1);
                if (c < 0.0L) c = 0.0L;
            }
            const long double v = c + lambda + value[e + 1];
            const int sc = 1 + segs[e + 1];
            if (v < best || (v == best && sc < best_segs)) {
                best = v;
                best_segs = sc;
                best_e = e;
            }
        }
        value[i] = best;
        segs[i] = best_segs;
        pick[i] = best_e;
    }

    std::vector<int> ends;
    for (int i = 1; i <= n; i = pick[static_cast<std::size_t>(i)] + 1)
        ends.push_back(pick[static_cast<std::size_t>(i)]);

    Segmentation s = build_segmentation(m, ends);
    s.gamma = gamma;
    s.h_value = static_cast<double>((value[1] - lambda) / static_cast<long double>(n));
    return s;
}

SolutionPath solve_path(const SampledSignal& y, int k_max) {
    const int n = y.size();
    require(1 <= k_max && k_max <= n - 1, "solve_path: need 1 <= k_max <= n-1");
    LayeredDp dp(y);
    dp.extend_to(k_max + 1);

    SolutionPath path;
    path.n = n;
    for (int k = 0; k <= k_max; ++k) {
        Segmentation s = dp.fit_for_budget(k);
        path.rss.push_back(s.rss);
        path.jumps.push_back(std::move(s.jumps));
    }

    // Lower convex hull of (k, rss_k), keeping strict improvements only;
    // slopes between consecutive vertices give the gamma thresholds.
    std::vector<int> hull;
    double seen_min = path.rss[0];
    auto drop = [&](int u, int v) {
        return (path.rss[static_cast<std::size_t>(u)] - path.rss[static_cast<std::size_t>(v)]) /
               static_cast<double>(v - u);
    };
    hull.push_back(0);
    for (int k = 1; k <= k_max; ++k) {
        if (!(path.rss[static_cast<std::size_t>(k)] < seen_min)) continue;
        seen_min = path.rss[static_cast<std::size_t>(k)];
        while (hull.size() >= 2 &&
               drop(hull[hull.size() - 2], hull.back()) <= drop(hull[hull.size() - 2], k))
            hull.pop_back();
        hull.push_back(k);
    }
    for (std::size_t j = 1; j < hull.size(); ++j)
        path.knots.push_back(PathKnot{drop(hull[j - 1], hull[j]) / static_cast<double>(n),
                                      hull[j]});
    return path;
}

Segmentation brute_force_fit(const SampledSignal& y, double gamma) {
    require(std::isfinite(gamma) && gamma > 0.0,
            "brute_force_fit: gamma must be positive and finite");
    const int n = y.size();
    require(n <= 20, "brute_force_fit: refused for n > 20");
    const PrefixMoments m(y);
    const long double lambda = static_cast<long double>(n) * gamma;

    long double best = kInf;
    std::vector<int> best_ends;
    int ends[21];
    for (std::uint64_t mask = 0; mask < (1ULL << (n - 1)); ++mask) {
        int cnt = 0;
        for (int j = 1; j < n; ++j)
            if (mask & (1ULL << (j - 1))) ends[cnt++] = j;
        ends[cnt++] = n;
        // Same right-to-left fold as the DP recursion, for bitwise agreement.
        long double v = 0.0L;
        int start_of;
        for (int s = cnt - 1; s >= 0; --s) {
            start_of = (s == 0) ? 1 : ends[s - 1] + 1;
            v = segment_cost(m, start_of, ends[s]) + lambda + v;
        }
        bool take = false;
        if (v < best) {
            take = true;
        } else if (v == best) {
            const int old_cnt = static_cast<int>(best_ends.size());
            if (cnt < old_cnt) {
                take = true;
            } else if (cnt == old_cnt) {
                take = std::lexicographical_compare(ends, ends + cnt - 1,
                                                    best_ends.begin(), best_ends.end() - 1);
            }
        }
        if (take) {
            best = v;
            best_ends.assign(ends, ends + cnt);
        }
    }

    Segmentation s = build_segmentation(m, best_ends);
    s.gamma = gamma;
    s.h_value = static_cast<double>((best - lambda) / static_cast<long double>(n));
    return s;
}

std::optional<std::string> check_minimizer_inequalities(const SampledSignal& y,
                                                        double gamma,
                                                        const Segmentation& fit,
                                                        double tol) {
    const int n = y.size();
    require(fit.n == n, "check_minimizer_inequalities: size mismatch");
    const PrefixMoments m(y);
    const long double nl = static_cast<long double>(n);

    std::vector<int> starts{1};
    std::vector<int> stops;
    for (int j : fit.jumps) {
        stops.push_back(j);
        starts.push_back(j + 1);
    }
    stops.push_back(n);
    const int segs = static_cast<int>(starts.size());

    // (a) merging two adjacent segments must not pay: the jump between them
    // is worth at least gamma.
    for (int s = 0; s + 1 < segs; ++s) {
        const long double len_l = stops[s] - starts[s] + 1;
        const long double len_r = stops[s + 1] - starts[s + 1] + 1;
        const long double dmu = static_cast<long double>(m.mean(starts[s], stops[s])) -
                                m.mean(starts[s + 1], stops[s + 1]);
        const long double bound = len_l * len_r / (nl * (len_l + len_r)) * dmu * dmu;
        if (!(gamma <= static_cast<double>(bound) + tol))
            return "merge gain bound violated at jump " + std::to_string(stops[s]) +
                   ": gamma=" + std::to_string(gamma) +
                   " > " + std::to_string(static_cast<double>(bound));
    }

    // (b) splitting a run out of any segment must not pay more than the
    // penalty of the two new jumps.
    for (int s = 0; s < segs; ++s) {
        const double a = fit.levels[static_cast<std::size_t>(s)];
        for (int i = starts[s]; i <= stops[s]; ++i) {
            long double run_sum = 0.0L;
            for (int j = i; j <= stops[s]; ++j) {
                run_sum += y[j];
                const long double len = j - i + 1;
                const long double dev = run_sum / len - a;
                const long double gain = len / nl * dev * dev;
                if (!(2.0 * gamma >= static_cast<double>(gain) - tol))
                    return "run split bound violated on [" + std::to_string(i) + "," +
                           std::to_string(j) + "]: 2*gamma=" + std::to_string(2.0 * gamma) +
                           " < " + std::to_string(static_cast<double>(gain));
            }
        }
    }

    // (c) runs right of each jump sit on the far side of the level midpoint.
    for (int s = 0; s + 1 < segs; ++s) {
        const double a = fit.levels[static_cast<std::size_t>(s)];
        const double b = fit.levels[static_cast<std::size_t>(s + 1)];
        const double mid = 0.5 * (a + b);
        long double run_sum = 0.0L;
        for (int j = starts[s + 1]; j <= stops[s + 1]; ++j) {
            run_sum += y[j];
            const double mu = static_cast<double>(run_sum / (j - starts[s + 1] + 1));
            if (!((b - a) * (mu - mid) >= -tol))
                return "midpoint side violated right of jump " + std::to_string(stops[s]) +
                       " at run end " + std::to_string(j);
        }
    }
    return std::nullopt;
}

} // namespace stepfit::potts
