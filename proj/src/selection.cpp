#include "stepfit/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stepfit::selection {

namespace {

constexpr double kMadGaussianScale = 0.674489750196082; // third quartile of |N(0,1)| pairs

double median_inplace(std::vector<double>& v) {
    const std::size_t m = v.size();
    const std::size_t mid = m / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double hi = v[mid];
    if (m % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid - 1),
                     v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (v[mid - 1] + hi);
}

} // namespace

std::vector<std::string> SelectionConfig::warnings() const {
    std::vector<std::string> w;
    if (c_const < 2.0)
        w.push_back("penalty constant " + std::to_string(c_const) +
                    " is below 2; the log rule is only understood for constants >= 2");
    return w;
}

double estimate_sigma(const SampledSignal& y, const SigmaSpec& spec) {
    if (spec.method == SigmaMethod::fixed) {
        if (!(spec.fixed_value >= 0.0) || !std::isfinite(spec.fixed_value))
            throw std::invalid_argument("estimate_sigma: fixed sigma must be finite and >= 0");
        return spec.fixed_value;
    }
    const int n = y.size();
    if (n < 2) throw std::invalid_argument("estimate_sigma: need n >= 2 for difference methods");
    if (spec.method == SigmaMethod::mad_diff) {
        std::vector<double> d;
        d.reserve(static_cast<std::size_t>(n - 1));
        for (int i = 1; i < n; ++i) d.push_back(std::fabs(y[i + 1] - y[i]));
        return median_inplace(d) / (std::sqrt(2.0) * kMadGaussianScale);
    }
    long double acc = 0.0L;
    for (int i = 1; i < n; ++i) {
        const long double d = static_cast<long double>(y[i + 1]) - y[i];
        acc += d * d;
    }
    return std::sqrt(static_cast<double>(acc / (2.0L * (n - 1))));
}

double log_penalty(int n, double sigma, double c) {
    if (n < 2) throw std::invalid_argument("log_penalty: need n >= 2");
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("log_penalty: sigma must be finite and >= 0");
    if (!(c > 0.0)) throw std::invalid_argument("log_penalty: c must be positive");
    return c * sigma * sigma * std::log(static_cast<double>(n)) / n;
}

MrCheckResult mr_check(const SampledSignal& y, const potts::Segmentation& fit,
                       double threshold, IntervalFamily family) {
    const int n = y.size();
    if (fit.n != n) throw std::invalid_argument("mr_check: fit size mismatch");
    if (!(threshold >= 0.0)) throw std::invalid_argument("mr_check: threshold must be >= 0");

    const std::vector<double> fv = fit.fitted_values();
    std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
    long double acc = 0.0L;
    for (int i = 1; i <= n; ++i) {
        acc += static_cast<long double>(y[i]) - fv[static_cast<std::size_t>(i - 1)];
        prefix[static_cast<std::size_t>(i)] = static_cast<double>(acc);
    }

    MrCheckResult r;
    r.worst_stat = -1.0;
    auto consider = [&](int i, int j) {
        const double s = prefix[static_cast<std::size_t>(j)] - prefix[static_cast<std::size_t>(i - 1)];
        const double stat = std::fabs(s) / std::sqrt(static_cast<double>(j - i + 1));
        if (stat > r.worst_stat) {
            r.worst_stat = stat;
            r.worst_i = i;
            r.worst_j = j;
        }
    };
    if (family == IntervalFamily::all) {
        for (int i = 1; i <= n; ++i)
            for (int j = i; j <= n; ++j) consider(i, j);
    } else {
        for (int len = 1; len <= n; len *= 2)
            for (int start = 1; start + len - 1 <= n; start += len) consider(start, start + len - 1);
    }
    r.pass = r.worst_stat <= threshold;
    return r;
}

MrSelection mr_select(const SampledSignal& y, const SelectionConfig& cfg,
                      std::optional<int> max_jumps) {
    const int n = y.size();
    if (n < 2) throw std::invalid_argument("mr_select: need n >= 2");
    if (!(cfg.delta >= 0.0)) throw std::invalid_argument("mr_select: delta must be >= 0");

    MrSelection sel;
    sel.sigma_hat = estimate_sigma(y, cfg.sigma);
    sel.threshold = (1.0 + cfg.delta) * sel.sigma_hat * std::sqrt(2.0 * std::log(n));

    const int cap = std::clamp(max_jumps.value_or(n - 1), 1, n - 1);
    potts::LayeredDp dp(y);
    std::vector<double> rss;                       // indexed by k
    std::vector<std::optional<MrCheckResult>> mr;  // cached per k

    auto checked = [&](int k) -> const MrCheckResult& {
        if (static_cast<int>(mr.size()) <= k) mr.resize(static_cast<std::size_t>(k) + 1);
        auto& slot = mr[static_cast<std::size_t>(k)];
        if (!slot)
            slot = mr_check(y, dp.fit_for_budget(k), sel.threshold, cfg.interval_family);
        return *slot;
    };

    int K = std::min(8, cap);
    int provisional_k = -1;
    double provisional_gamma = 0.0;
    for (;;) {
        dp.extend_to(K + 1);
        for (int k = static_cast<int>(rss.size()); k <= K; ++k)
            rss.push_back(dp.budget_rss(k));

        // Hull over (k, rss_k), strict improvements only.
        std::vector<int> hull{0};
        double seen_min = rss[0];
        auto drop = [&](int u, int v) {
            return (rss[static_cast<std::size_t>(u)] - rss[static_cast<std::size_t>(v)]) /
                   static_cast<double>(v - u);
        };
        for (int k = 1; k <= K; ++k) {
            if (!(rss[static_cast<std::size_t>(k)] < seen_min)) continue;
            seen_min = rss[static_cast<std::size_t>(k)];
            while (hull.size() >= 2 &&
                   drop(hull[hull.size() - 2], hull.back()) <= drop(hull[hull.size() - 2], k))
                hull.pop_back();
            hull.push_back(k);
        }

        // Deeper layers can only remove hull vertices at or left of K, never
        // add them, so a failing vertex is skipped for good; a passing one is
        // selected once its membership in the full path's hull is certain.
        provisional_k = -1;
        for (std::size_t j = 0; j < hull.size(); ++j) {
            const int v = hull[j];
            const MrCheckResult& res = checked(v);
            if (!res.pass) continue;
            bool certain = (K >= n - 1) || j == 0;
            if (!certain) {
                // No future layer can undercut v's entering chord once the
                // steepest possible remaining drop, rss_v / (K+1-v), is
                // flatter than it.
                certain = drop(hull[j - 1], v) >=
                          rss[static_cast<std::size_t>(v)] / static_cast<double>(K + 1 - v);
            }
            if (!certain) {
                // Exact membership test: v survives to the full hull iff the
                // penalized fit just inside the top of its candidate gamma
                // interval has exactly v's jumps.  Its entering chord then
                // never changes, since vertices are only ever popped from
                // the right.
                const double gamma_test =
                    drop(hull[j - 1], v) / static_cast<double>(n) * (1.0 - 1e-9);
                certain = potts::fit_gamma(y, gamma_test).jumps == dp.fit_for_budget(v).jumps;
            }
            if (!certain) {
                provisional_k = v;
                if (j > 0) provisional_gamma = drop(hull[j - 1], v) / static_cast<double>(n);
                break;
            }
            sel.fit = dp.fit_for_budget(v);
            sel.passed = true;
            sel.k_selected = v;
            sel.worst_stat = res.worst_stat;
            if (j == 0) {
                sel.gamma_unbounded = true;
                sel.gamma_hat = std::numeric_limits<double>::infinity();
            } else {
                sel.gamma_hat = drop(hull[j - 1], v) / static_cast<double>(n);
            }
            return sel;
        }

        if (K >= cap) break;
        K = std::min(cap, 2 * K);
    }

    if (provisional_k >= 0) {
        // A fit passed but its knot could not be certified within the depth
        // cap; hand it back with the chord estimate of its threshold.
        sel.fit = dp.fit_for_budget(provisional_k);
        sel.passed = true;
        sel.k_selected = provisional_k;
        sel.worst_stat = checked(provisional_k).worst_stat;
        sel.gamma_hat = provisional_gamma;
        return sel;
    }

    // Nothing within the budget passed: hand back the deepest fit, flagged.
    sel.fit = dp.fit_for_budget(cap);
    sel.passed = false;
    sel.k_selected = cap;
    sel.worst_stat = checked(cap).worst_stat;
    sel.gamma_hat = 0.0;
    return sel;
}

CnReport cn_statistic(const std::vector<double>& xi) {
    const int n = static_cast<int>(xi.size());
    if (n < 2) throw std::invalid_argument("cn_statistic: need n >= 2");
    const double log_n = std::log(static_cast<double>(n));

    std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
    long double acc = 0.0L;
    for (int i = 1; i <= n; ++i) {
        acc += xi[static_cast<std::size_t>(i - 1)];
        prefix[static_cast<std::size_t>(i)] = static_cast<double>(acc);
    }
    std::vector<double> weight(static_cast<std::size_t>(n) + 1, 0.0);
    for (int len = 1; len <= n; ++len)
        weight[static_cast<std::size_t>(len)] = 1.0 / (static_cast<double>(len) * log_n);

    CnReport r;
    r.cn = -1.0;
    for (int i = 1; i <= n; ++i) {
        const double base = prefix[static_cast<std::size_t>(i - 1)];
        for (int j = i; j <= n; ++j) {
            const double s = prefix[static_cast<std::size_t>(j)] - base;
            const double stat = s * s * weight[static_cast<std::size_t>(j - i + 1)];
            if (stat > r.cn) {
                r.cn = stat;
                r.arg_i = i;
                r.arg_j = j;
            }
        }
    }
    return r;
}

} // namespace stepfit::selection
