#include "stepfit/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "stepfit/metrics.hpp"
#include "stepfit/step_function.hpp"

namespace stepfit::experiments {

namespace {

// A rule can legitimately produce gamma = 0 (noise-free data under the
// log rule); any penalty below the rounding dust of the objective selects
// the minimal exact-fit segmentation, so clamp instead of failing.
constexpr double kPenaltyFloor = 1e-12;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::uint64_t replicate_seed(std::uint64_t base, int n_index, int replicate) {
    return base ^ (static_cast<std::uint64_t>(n_index) << 32) ^
           static_cast<std::uint64_t>(replicate);
}

void check_common(const RateExperimentConfig& cfg, int min_grid) {
    if (static_cast<int>(cfg.n_grid.size()) < min_grid) {
        throw std::invalid_argument("experiments: n_grid needs at least " +
                                    std::to_string(min_grid) + " entries");
    }
    for (size_t i = 0; i < cfg.n_grid.size(); ++i) {
        if (cfg.n_grid[i] < 2) throw std::invalid_argument("experiments: every n must be >= 2");
        if (i > 0 && cfg.n_grid[i] <= cfg.n_grid[i - 1]) {
            throw std::invalid_argument("experiments: n_grid must be strictly increasing");
        }
    }
    if (cfg.replicates < 1) throw std::invalid_argument("experiments: replicates must be >= 1");
    if (cfg.sigma) {
        if (!(*cfg.sigma >= 0.0) || !std::isfinite(*cfg.sigma)) {
            throw std::invalid_argument("experiments: sigma must be finite and >= 0");
        }
    } else if (!(cfg.snr > 0.0) || !std::isfinite(cfg.snr)) {
        throw std::invalid_argument("experiments: snr must be finite and positive");
    }
    if (cfg.penalty.rule == PenaltyRule::fixed &&
        (!(cfg.penalty.fixed_gamma > 0.0) || !std::isfinite(cfg.penalty.fixed_gamma))) {
        throw std::invalid_argument("experiments: fixed gamma must be finite and positive");
    }
    if (cfg.threads < 1) throw std::invalid_argument("experiments: threads must be >= 1");
}

// Runs fn(0..count-1), partitioned over `threads` workers; the first
// exception wins and is rethrown after all workers finish.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const int k = std::min(threads, count);
    pool.reserve(k);
    for (int t = 0; t < k; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct FittedReplicate {
    double sigma = 0.0;
    double sigma_hat = kNan;
    double gamma = 0.0;
    potts::Segmentation fit;
    SampledSignal y;
};

FittedReplicate fit_replicate(const RateExperimentConfig& cfg, const SampledSignal& clean,
                              int n, std::uint64_t seed) {
    const double sigma = cfg.sigma ? *cfg.sigma : signals::sigma_for_snr(clean, cfg.snr);
    SampledSignal y = signals::add_noise(clean, {cfg.noise, sigma, seed});
    FittedReplicate r{sigma, kNan, 0.0, {}, std::move(y)};
    const PenaltySpec& pen = cfg.penalty;
    switch (pen.rule) {
        case PenaltyRule::log_rule: {
            r.sigma_hat = selection::estimate_sigma(r.y, pen.sigma);
            r.gamma = std::max(selection::log_penalty(n, r.sigma_hat, pen.c_const), kPenaltyFloor);
            r.fit = potts::fit_gamma(r.y, r.gamma);
            break;
        }
        case PenaltyRule::mr: {
            selection::SelectionConfig sc;
            sc.c_const = pen.c_const;
            sc.delta = pen.delta;
            sc.sigma = pen.sigma;
            auto sel = selection::mr_select(r.y, sc);
            r.sigma_hat = sel.sigma_hat;
            r.gamma = sel.gamma_unbounded ? std::numeric_limits<double>::infinity()
                                          : sel.gamma_hat;
            r.fit = std::move(sel.fit);
            break;
        }
        case PenaltyRule::fixed: {
            r.gamma = pen.fixed_gamma;
            r.fit = potts::fit_gamma(r.y, r.gamma);
            break;
        }
    }
    return r;
}

double metric_value(RateMetric metric, const potts::Segmentation& fit, const StepFunction& truth) {
    switch (metric) {
        case RateMetric::l2:
            return l2_distance(potts::to_step_function(fit), truth);
        case RateMetric::hausdorff: {
            const StepFunction fhat = potts::to_step_function(fit);
            return metrics::hausdorff(metrics::JumpSet(jump_set(fhat)),
                                      metrics::JumpSet(jump_set(truth)));
        }
        case RateMetric::skorokhod:
            return metrics::skorokhod(potts::to_step_function(fit), truth).distance;
        case RateMetric::jump_count:
            return std::abs(fit.jump_count() - static_cast<int>(truth.breakpoints().size()));
    }
    throw std::logic_error("metric_value: unreachable");
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LineFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t m = x.size();
    double mx = 0, my = 0;
    for (size_t i = 0; i < m; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

double quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double h = p * (v.size() - 1);
    const size_t lo = static_cast<size_t>(h);
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] + (h - lo) * (v[lo + 1] - v[lo]);
}

template <typename Row, typename Compute>
std::vector<Row> run_grid(const RateExperimentConfig& cfg, const FitObserver& observer,
                          const Compute& compute) {
    std::vector<SampledSignal> cleans;
    cleans.reserve(cfg.n_grid.size());
    std::vector<StepFunction> truths;
    truths.reserve(cfg.n_grid.size());
    for (int n : cfg.n_grid) {
        cleans.push_back(signals::generate(cfg.signal, n));
        truths.push_back(embed(cleans.back()));
    }
    const int reps = cfg.replicates;
    const int total = static_cast<int>(cfg.n_grid.size()) * reps;
    std::vector<Row> rows(total);
    const int threads = observer ? 1 : cfg.threads;
    parallel_for(total, threads, [&](int t) {
        const int ni = t / reps;
        const int rep = t % reps;
        const int n = cfg.n_grid[ni];
        const std::uint64_t seed = replicate_seed(cfg.base_seed, ni, rep);
        try {
            FittedReplicate fr = fit_replicate(cfg, cleans[ni], n, seed);
            if (observer) observer(FitObservation{n, rep, seed, fr.gamma, fr.y, fr.fit});
            rows[t] = compute(fr, truths[ni], n, rep, seed);
        } catch (const std::exception& e) {
            throw std::runtime_error("replicate failed (n=" + std::to_string(n) +
                                     ", replicate=" + std::to_string(rep) +
                                     ", seed=" + std::to_string(seed) + "): " + e.what());
        }
    });
    return rows;
}

} // namespace

RateResult run_rate(const RateExperimentConfig& cfg, const FitObserver& observer) {
    check_common(cfg, 2);
    RateResult out;
    out.rows = run_grid<RateRow>(
        cfg, observer,
        [&](const FittedReplicate& fr, const StepFunction& truth, int n, int rep,
            std::uint64_t seed) {
            RateRow row;
            row.n = n;
            row.replicate = rep;
            row.seed = seed;
            row.sigma = fr.sigma;
            row.sigma_hat = fr.sigma_hat;
            row.gamma = fr.gamma;
            row.jump_count = fr.fit.jump_count();
            row.value = metric_value(cfg.metric, fr.fit, truth);
            return row;
        });
    const int reps = cfg.replicates;
    std::vector<double> lx, ly;
    bool all_positive = true;
    for (size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        RatePoint pt;
        pt.n = cfg.n_grid[ni];
        double sum = 0;
        for (int r = 0; r < reps; ++r) sum += out.rows[ni * reps + r].value;
        pt.mean = sum / reps;
        if (reps > 1) {
            double ss = 0;
            for (int r = 0; r < reps; ++r) {
                const double d = out.rows[ni * reps + r].value - pt.mean;
                ss += d * d;
            }
            pt.std_error = std::sqrt(ss / (reps - 1)) / std::sqrt(static_cast<double>(reps));
        }
        out.points.push_back(pt);
        if (pt.mean > 0) {
            lx.push_back(std::log(static_cast<double>(pt.n)));
            ly.push_back(std::log(pt.mean));
        } else {
            all_positive = false;
        }
    }
    if (all_positive) {
        const LineFit f = ols(lx, ly);
        out.slope = f.slope;
        out.intercept = f.intercept;
        out.slope_defined = true;
    }
    return out;
}

RecoveryResult run_recovery(const RateExperimentConfig& cfg, const FitObserver& observer) {
    check_common(cfg, 1);
    using signals::Family;
    const Family fam = cfg.signal.family;
    if (fam != Family::step && fam != Family::blocks) {
        throw std::invalid_argument("run_recovery: needs a piecewise-constant signal family");
    }
    RecoveryResult out;
    out.rows = run_grid<RecoveryRow>(
        cfg, observer,
        [&](const FittedReplicate& fr, const StepFunction& truth, int n, int rep,
            std::uint64_t seed) {
            RecoveryRow row;
            row.n = n;
            row.replicate = rep;
            row.seed = seed;
            row.jump_count = fr.fit.jump_count();
            row.match = row.jump_count == static_cast<int>(truth.breakpoints().size());
            const StepFunction fhat = potts::to_step_function(fr.fit);
            row.hausdorff = metrics::hausdorff(metrics::JumpSet(jump_set(fhat)),
                                               metrics::JumpSet(jump_set(truth)));
            return row;
        });
    const int reps = cfg.replicates;
    for (size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        RecoveryPoint pt;
        pt.n = cfg.n_grid[ni];
        int matched = 0;
        double sum_h = 0;
        for (int r = 0; r < reps; ++r) {
            const RecoveryRow& row = out.rows[ni * reps + r];
            if (row.match) {
                ++matched;
                sum_h += row.hausdorff;
            }
        }
        pt.match_fraction = static_cast<double>(matched) / reps;
        pt.mean_hausdorff = matched ? sum_h / matched : kNan;
        pt.mean_scaled_hausdorff = pt.n * pt.mean_hausdorff;
        out.points.push_back(pt);
    }
    return out;
}

std::vector<Figure1Cell> run_figure1(std::uint64_t seed) {
    constexpr int n = 2048;
    const std::array<std::pair<signals::Family, const char*>, 4> families = {{
        {signals::Family::blocks, "blocks"},
        {signals::Family::bumps, "bumps"},
        {signals::Family::heavisine, "heavisine"},
        {signals::Family::doppler, "doppler"},
    }};
    const std::array<double, 3> snrs = {7.0, 4.0, 1.0};
    std::vector<Figure1Cell> cells;
    int index = 0;
    for (const auto& [family, name] : families) {
        signals::SignalSpec spec;
        spec.family = family;
        const SampledSignal clean = signals::generate(spec, n);
        for (double snr : snrs) {
            Figure1Cell cell;
            cell.family = name;
            cell.snr = snr;
            cell.n = n;
            cell.seed = seed ^ (static_cast<std::uint64_t>(index) << 32);
            cell.sigma = signals::sigma_for_snr(clean, snr);
            const SampledSignal y =
                signals::add_noise(clean, {signals::NoiseFamily::gaussian, cell.sigma, cell.seed});
            cell.sigma_hat = selection::estimate_sigma(y, {});
            cell.gamma = std::max(selection::log_penalty(n, cell.sigma_hat, 2.5), kPenaltyFloor);
            cell.fit = potts::fit_gamma(y, cell.gamma);
            cell.clean = clean.values();
            cell.noisy = y.values();
            cells.push_back(std::move(cell));
            ++index;
        }
    }
    return cells;
}

CnResult run_cn(const CnConfig& cfg) {
    if (cfg.n_grid.empty()) throw std::invalid_argument("run_cn: n_grid must be non-empty");
    for (size_t i = 0; i < cfg.n_grid.size(); ++i) {
        if (cfg.n_grid[i] < 2) throw std::invalid_argument("run_cn: every n must be >= 2");
        if (i > 0 && cfg.n_grid[i] <= cfg.n_grid[i - 1]) {
            throw std::invalid_argument("run_cn: n_grid must be strictly increasing");
        }
    }
    if (cfg.replicates < 1) throw std::invalid_argument("run_cn: replicates must be >= 1");
    if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma)) {
        throw std::invalid_argument("run_cn: sigma must be finite and >= 0");
    }
    const int reps = cfg.replicates;
    const int total = static_cast<int>(cfg.n_grid.size()) * reps;
    CnResult out;
    out.rows.resize(total);
    parallel_for(total, cfg.threads, [&](int t) {
        const int ni = t / reps;
        const int rep = t % reps;
        const int n = cfg.n_grid[ni];
        CnRow& row = out.rows[t];
        row.n = n;
        row.replicate = rep;
        row.seed = replicate_seed(cfg.base_seed, ni, rep);
        const std::vector<double> xi = signals::draw_noise(n, {cfg.noise, cfg.sigma, row.seed});
        row.cn = selection::cn_statistic(xi).cn;
    });
    for (size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        CnPoint pt;
        pt.n = cfg.n_grid[ni];
        std::vector<double> vals(reps);
        double sum = 0;
        for (int r = 0; r < reps; ++r) {
            vals[r] = out.rows[ni * reps + r].cn;
            sum += vals[r];
        }
        pt.mean = sum / reps;
        pt.median = quantile(vals, 0.5);
        pt.q25 = quantile(vals, 0.25);
        pt.q75 = quantile(vals, 0.75);
        out.points.push_back(pt);
    }
    return out;
}

} // namespace stepfit::experiments
