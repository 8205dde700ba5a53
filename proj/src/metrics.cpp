#include "stepfit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stepfit::metrics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest distance from a point of `a` to the set `b` (both sorted,
// b nonempty).
double directed_hausdorff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    std::size_t j = 0;
    for (double x : a) {
        while (j + 1 < b.size() && std::fabs(b[j + 1] - x) <= std::fabs(b[j] - x)) ++j;
        worst = std::max(worst, std::fabs(b[j] - x));
    }
    return worst;
}

} // namespace

JumpSet::JumpSet(std::vector<double> points) : points_(std::move(points)) {
    for (double p : points_)
        if (!(p > 0.0) || !(p < 1.0))
            throw std::invalid_argument("JumpSet: points must lie in (0,1)");
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

double hausdorff(const JumpSet& a, const JumpSet& b) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return 1.0;
    return std::max(directed_hausdorff(a.points(), b.points()),
                    directed_hausdorff(b.points(), a.points()));
}

double sup_distance(const StepFunction& f, const StepFunction& g) {
    const auto& bf = f.breakpoints();
    const auto& bg = g.breakpoints();
    double worst = 0.0;
    std::size_t i = 0, j = 0;
    double lo = 0.0;
    while (lo < 1.0) {
        worst = std::max(worst, std::fabs(f.levels()[i] - g.levels()[j]));
        const double nf = (i < bf.size()) ? bf[i] : 1.0;
        const double ng = (j < bg.size()) ? bg[j] : 1.0;
        const double hi = std::min(nf, ng);
        if (nf == hi && i < bf.size()) ++i;
        if (ng == hi && j < bg.size()) ++j;
        lo = hi;
    }
    return worst;
}

namespace {

// Shared evaluation of one warp segment between consecutive anchors.  The
// anchor pair maps g-time [tg0, tg1] linearly onto f-time [tf0, tf1]; the
// enclosed unmatched jumps interleave according to that chord.
struct EdgeCost {
    double time_term;
    double level_term;
};

struct Side {
    const std::vector<double>* bp;
    const std::vector<double>* lv;
    // Jump position with virtual endpoints: index 0 -> 0.0, index p+1 -> 1.0.
    double pos(int idx) const {
        if (idx == 0) return 0.0;
        if (idx == static_cast<int>(bp->size()) + 1) return 1.0;
        return (*bp)[static_cast<std::size_t>(idx - 1)];
    }
    double level(int piece) const { return (*lv)[static_cast<std::size_t>(piece)]; }
    int jumps() const { return static_cast<int>(bp->size()); }
};

EdgeCost edge_cost(const Side& f, const Side& g, int i0, int j0, int i1, int j1) {
    const double sf0 = f.pos(i0), sf1 = f.pos(i1);
    const double tg0 = g.pos(j0), tg1 = g.pos(j1);
    const double df = sf1 - sf0;
    const double dg = tg1 - tg0;
    EdgeCost c;
    c.time_term = std::fabs(std::log(df / dg));

    // Walk the interleaving: f-jump i lands before g-jump j under the chord
    // iff (pos_f(i) - sf0) * dg < (pos_g(j) - tg0) * df.
    double worst = std::fabs(f.level(i0) - g.level(j0));
    int i = i0 + 1, j = j0 + 1;
    while (i < i1 || j < j1) {
        bool step_f;
        if (i >= i1) {
            step_f = false;
        } else if (j >= j1) {
            step_f = true;
        } else {
            const double lhs = (f.pos(i) - sf0) * dg;
            const double rhs = (g.pos(j) - tg0) * df;
            if (lhs == rhs) { // simultaneous under this warp: cross together
                ++i;
                ++j;
                worst = std::max(worst, std::fabs(f.level(i - 1) - g.level(j - 1)));
                continue;
            }
            step_f = lhs < rhs;
        }
        if (step_f)
            ++i;
        else
            ++j;
        worst = std::max(worst, std::fabs(f.level(i - 1) - g.level(j - 1)));
    }
    c.level_term = worst;
    return c;
}

} // namespace

SkorokhodResult skorokhod(const StepFunction& fn, const StepFunction& gn) {
    Side f{&fn.breakpoints(), &fn.levels()};
    Side g{&gn.breakpoints(), &gn.levels()};
    const int p = f.jumps();
    const int q = g.jumps();

    // dp[i][j]: best achievable max-cost of a matching whose last matched
    // pair is (f-jump i, g-jump j); (0,0) is the fixed start anchor.
    std::vector<std::vector<double>> dp(static_cast<std::size_t>(p) + 1,
                                        std::vector<double>(static_cast<std::size_t>(q) + 1, kInf));
    std::vector<std::vector<std::pair<int, int>>> parent(
        static_cast<std::size_t>(p) + 1,
        std::vector<std::pair<int, int>>(static_cast<std::size_t>(q) + 1, {-1, -1}));
    dp[0][0] = 0.0;

    auto relax = [&](int i0, int j0, int i1, int j1) {
        const EdgeCost ec = edge_cost(f, g, i0, j0, i1, j1);
        const double v = std::max(dp[static_cast<std::size_t>(i0)][static_cast<std::size_t>(j0)],
                                  std::max(ec.time_term, ec.level_term));
        auto& cell = dp[static_cast<std::size_t>(i1)][static_cast<std::size_t>(j1)];
        if (v < cell) {
            cell = v;
            parent[static_cast<std::size_t>(i1)][static_cast<std::size_t>(j1)] = {i0, j0};
        }
    };

    for (int i = 1; i <= p; ++i)
        for (int j = 1; j <= q; ++j) {
            relax(0, 0, i, j);
            for (int i0 = 1; i0 < i; ++i0)
                for (int j0 = 1; j0 < j; ++j0)
                    relax(i0, j0, i, j);
        }

    // Close every candidate matching with the final segment up to (1,1).
    double best = kInf;
    std::pair<int, int> best_last{-1, -1};
    for (int i = 0; i <= p; ++i)
        for (int j = 0; j <= q; ++j) {
            if (dp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == kInf) continue;
            if (i == 0 && j != 0) continue; // matchings start at the shared anchor
            if (j == 0 && i != 0) continue;
            const EdgeCost ec = edge_cost(f, g, i, j, p + 1, q + 1);
            const double v =
                std::max(dp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                         std::max(ec.time_term, ec.level_term));
            if (v < best) {
                best = v;
                best_last = {i, j};
            }
        }

    // Recover the matched pairs and the two cost components along the chain.
    std::vector<std::pair<int, int>> chain; // matched pairs, excluding anchors
    for (std::pair<int, int> cur = best_last; cur.first > 0 || cur.second > 0;
         cur = parent[static_cast<std::size_t>(cur.first)][static_cast<std::size_t>(cur.second)])
        chain.push_back(cur);
    std::reverse(chain.begin(), chain.end());

    SkorokhodResult r;
    r.distance = best;
    std::vector<std::pair<int, int>> anchors;
    anchors.emplace_back(0, 0);
    for (auto& pr : chain) anchors.push_back(pr);
    anchors.emplace_back(p + 1, q + 1);
    for (std::size_t s = 0; s + 1 < anchors.size(); ++s) {
        const EdgeCost ec = edge_cost(f, g, anchors[s].first, anchors[s].second,
                                      anchors[s + 1].first, anchors[s + 1].second);
        r.time_term = std::max(r.time_term, ec.time_term);
        r.level_term = std::max(r.level_term, ec.level_term);
    }
    for (auto& pr : chain)
        r.matching.emplace_back(f.pos(pr.first), g.pos(pr.second));
    return r;
}

} // namespace stepfit::metrics
