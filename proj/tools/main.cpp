// stepfit: exact jump-penalized least-squares segmentation from the
// command line.  Subcommands wrap the library one-to-one; all randomness
// requires an explicit --seed so runs are reproducible byte for byte.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stepfit/experiments.hpp"
#include "stepfit/io.hpp"
#include "stepfit/metrics.hpp"
#include "stepfit/potts.hpp"
#include "stepfit/selection.hpp"
#include "stepfit/signals.hpp"
#include "stepfit/step_function.hpp"

namespace {

using nlohmann::json;
using namespace stepfit;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        io::write_text_file(out_path, text);
    }
}

void preflight_writable(const std::string& path) {
    if (path.empty()) return;
    io::write_text_file(path, "");
}

signals::Family parse_family(const std::string& s) {
    if (s == "blocks") return signals::Family::blocks;
    if (s == "bumps") return signals::Family::bumps;
    if (s == "heavisine") return signals::Family::heavisine;
    if (s == "doppler") return signals::Family::doppler;
    if (s == "step") return signals::Family::step;
    if (s == "lipschitz_ramp" || s == "ramp") return signals::Family::lipschitz_ramp;
    if (s == "holder") return signals::Family::holder;
    if (s == "bv_example") return signals::Family::bv_example;
    throw std::invalid_argument("unknown signal family: " + s);
}

signals::NoiseFamily parse_noise(const std::string& s) {
    if (s == "gaussian") return signals::NoiseFamily::gaussian;
    if (s == "rademacher") return signals::NoiseFamily::rademacher;
    if (s == "uniform") return signals::NoiseFamily::uniform;
    throw std::invalid_argument("unknown noise family: " + s);
}

selection::SigmaSpec parse_sigma_spec(const std::string& s) {
    selection::SigmaSpec spec;
    if (s == "mad") {
        spec.method = selection::SigmaMethod::mad_diff;
    } else if (s == "msd") {
        spec.method = selection::SigmaMethod::mean_sq_diff;
    } else {
        spec.method = selection::SigmaMethod::fixed;
        try {
            size_t pos = 0;
            spec.fixed_value = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
        } catch (const std::exception&) {
            throw std::invalid_argument("--sigma expects 'mad', 'msd', or a number, got: " + s);
        }
    }
    return spec;
}

selection::IntervalFamily parse_interval_family(const std::string& s) {
    if (s == "all") return selection::IntervalFamily::all;
    if (s == "dyadic") return selection::IntervalFamily::dyadic;
    throw std::invalid_argument("unknown interval family: " + s);
}

experiments::RateMetric parse_metric(const std::string& s) {
    if (s == "l2") return experiments::RateMetric::l2;
    if (s == "hausdorff") return experiments::RateMetric::hausdorff;
    if (s == "skorokhod") return experiments::RateMetric::skorokhod;
    if (s == "jump_count" || s == "jump-count") return experiments::RateMetric::jump_count;
    throw std::invalid_argument("unknown metric: " + s);
}

experiments::PenaltyRule parse_rule(const std::string& s) {
    if (s == "log") return experiments::PenaltyRule::log_rule;
    if (s == "mr") return experiments::PenaltyRule::mr;
    if (s == "fixed") return experiments::PenaltyRule::fixed;
    throw std::invalid_argument("--rule must be log, mr, or fixed");
}

// Flags shared by `signal` and the bench subcommands that generate data.
struct SignalFlags {
    std::string family;
    std::vector<double> jumps;
    std::vector<double> levels;
    double alpha = 0.5;
    CLI::Option* alpha_opt = nullptr;

    signals::SignalSpec to_spec() const {
        signals::SignalSpec spec;
        spec.family = parse_family(family);
        if (spec.family == signals::Family::step) {
            spec.jumps = jumps;
            spec.levels = levels;
        } else if (!jumps.empty() || !levels.empty()) {
            throw std::invalid_argument("--jumps/--levels apply only to --family step");
        }
        if (spec.family == signals::Family::holder) {
            spec.alpha = alpha;
        } else if (alpha_opt->count() > 0) {
            throw std::invalid_argument("--alpha applies only to --family holder");
        }
        return spec;
    }
};

void add_signal_flags(CLI::App* cmd, SignalFlags& f) {
    cmd->add_option("--family", f.family,
                    "Signal family: blocks, bumps, heavisine, doppler, step, ramp, holder, "
                    "bv_example")
        ->required();
    cmd->add_option("--jumps", f.jumps, "Jump locations in (0,1) for --family step")
        ->delimiter(',');
    cmd->add_option("--levels", f.levels, "Segment levels for --family step (one more than jumps)")
        ->delimiter(',');
    f.alpha_opt = cmd->add_option("--alpha", f.alpha, "Exponent for --family holder");
}

// Noise/penalty/bookkeeping flags shared by bench-rates and bench-recovery.
struct BenchFlags {
    std::vector<int> ns;
    int reps = 1;
    int threads = 1;
    std::uint64_t seed = 0;
    double snr = 7.0;
    double noise_sigma = 0.0;
    CLI::Option* noise_sigma_opt = nullptr;
    std::string noise = "gaussian";
    std::string rule = "log";
    double c_const = 2.5;
    double delta = 0.05;
    double gamma = 0.0;
    std::string sigma_est = "mad";
    std::string out;
    std::string out_csv;

    void fill(experiments::RateExperimentConfig& cfg) const {
        cfg.n_grid = ns;
        cfg.replicates = reps;
        cfg.base_seed = seed;
        cfg.threads = threads;
        cfg.noise = parse_noise(noise);
        cfg.snr = snr;
        if (noise_sigma_opt->count() > 0) cfg.sigma = noise_sigma;
        cfg.penalty.rule = parse_rule(rule);
        cfg.penalty.c_const = c_const;
        cfg.penalty.delta = delta;
        cfg.penalty.fixed_gamma = gamma;
        cfg.penalty.sigma = parse_sigma_spec(sigma_est);
    }
};

void add_bench_flags(CLI::App* cmd, BenchFlags& f) {
    cmd->add_option("--ns", f.ns, "Sample sizes, ascending")->required()->delimiter(',');
    cmd->add_option("--reps", f.reps, "Replicates per n")->required();
    cmd->add_option("--seed", f.seed, "Base seed")->required();
    cmd->add_option("--snr", f.snr, "Signal-to-noise ratio (default 7)");
    f.noise_sigma_opt = cmd->add_option("--noise-sigma", f.noise_sigma,
                                        "Noise sd (overrides --snr)");
    cmd->add_option("--noise", f.noise, "Noise family: gaussian, rademacher, uniform");
    cmd->add_option("--rule", f.rule, "Penalty rule: log, mr, fixed");
    cmd->add_option("--c-const", f.c_const, "Constant of the log rule");
    cmd->add_option("--delta", f.delta, "Slack of the residual criterion (mr)");
    cmd->add_option("--gamma", f.gamma, "Penalty for --rule fixed");
    cmd->add_option("--sigma-est", f.sigma_est, "Noise scale: mad, msd, or a number");
    cmd->add_option("--threads", f.threads, "Worker threads");
    cmd->add_option("--out", f.out, "Summary JSON path (default stdout)");
    cmd->add_option("--out-csv", f.out_csv, "Raw replicate table path");
}

json selection_to_json(const selection::MrSelection& sel) {
    json j;
    j["gamma_hat"] = nullptr;
    if (!sel.gamma_unbounded) j["gamma_hat"] = sel.gamma_hat;
    j["gamma_unbounded"] = sel.gamma_unbounded;
    j["passed"] = sel.passed;
    j["sigma_hat"] = sel.sigma_hat;
    j["threshold"] = sel.threshold;
    j["k_selected"] = sel.k_selected;
    j["worst_stat"] = sel.worst_stat;
    return j;
}

std::string values_csv(const std::vector<double>& values) {
    std::ostringstream out;
    for (double v : values) out << io::format_double(v) << '\n';
    return out.str();
}

int run(int argc, char** argv) {
    CLI::App app{"Exact least-squares segmentation with an L0 jump penalty"};
    app.require_subcommand(1);

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Fit a segmentation to a CSV signal");
    std::string fit_input, fit_out, fit_fitted_csv, fit_format = "json";
    std::string fit_select = "log", fit_sigma = "mad", fit_mr_family = "all";
    double fit_gamma_val = 0.0;
    double fit_c = 2.5, fit_delta = 0.05;
    int fit_max_jumps = 0;
    fit_cmd->add_option("input", fit_input, "Input CSV (one value per line, or x,y)")->required();
    auto* fit_gamma_opt = fit_cmd->add_option("--gamma", fit_gamma_val,
                                              "Fixed penalty (overrides --select)");
    fit_cmd->add_option("--select", fit_select, "Penalty rule: log (default) or mr");
    fit_cmd->add_option("--c-const", fit_c, "Constant of the log rule");
    fit_cmd->add_option("--delta", fit_delta, "Slack of the residual criterion (mr)");
    fit_cmd->add_option("--sigma", fit_sigma, "Noise scale: mad (default), msd, or a number");
    fit_cmd->add_option("--mr-family", fit_mr_family, "Residual intervals: all or dyadic");
    auto* fit_max_jumps_opt = fit_cmd->add_option("--max-jumps", fit_max_jumps,
                                                  "Search depth cap for mr selection");
    fit_cmd->add_option("--format", fit_format, "json (default) or csv (fitted values)");
    fit_cmd->add_option("--out", fit_out, "Output path (default stdout)");
    fit_cmd->add_option("--fitted-csv", fit_fitted_csv, "Also write fitted values as CSV");

    // path
    auto* path_cmd = app.add_subcommand("path", "Solution path over all jump budgets");
    std::string path_input, path_out;
    int path_k_max = 0;
    path_cmd->add_option("input", path_input, "Input CSV")->required();
    auto* path_k_max_opt = path_cmd->add_option("--k-max", path_k_max,
                                                "Largest jump budget (default min(n-1, 256))");
    path_cmd->add_option("--out", path_out, "Output path (default stdout)");

    // select
    auto* select_cmd = app.add_subcommand("select", "Automatic penalty by the residual criterion");
    std::string select_input, select_out, select_sigma = "mad", select_mr_family = "all";
    double select_delta = 0.05;
    int select_max_jumps = 0;
    select_cmd->add_option("input", select_input, "Input CSV")->required();
    select_cmd->add_option("--delta", select_delta, "Slack of the residual criterion");
    select_cmd->add_option("--sigma", select_sigma, "Noise scale: mad (default), msd, or a number");
    select_cmd->add_option("--mr-family", select_mr_family, "Residual intervals: all or dyadic");
    auto* select_max_jumps_opt = select_cmd->add_option("--max-jumps", select_max_jumps,
                                                        "Search depth cap");
    select_cmd->add_option("--out", select_out, "Output path (default stdout)");

    // signal
    auto* signal_cmd = app.add_subcommand("signal", "Generate a test signal");
    SignalFlags signal_flags;
    add_signal_flags(signal_cmd, signal_flags);
    int signal_n = 0;
    bool signal_clean = false;
    double signal_snr = 0.0, signal_sigma = 0.0;
    std::uint64_t signal_seed = 0;
    std::string signal_noise = "gaussian", signal_out, signal_format = "csv";
    signal_cmd->add_option("--n", signal_n, "Sample count")->required();
    signal_cmd->add_flag("--clean", signal_clean, "Emit the noiseless signal");
    auto* signal_snr_opt = signal_cmd->add_option("--snr", signal_snr,
                                                  "Signal-to-noise ratio ||f||^2/sigma^2");
    auto* signal_sigma_opt = signal_cmd->add_option("--sigma", signal_sigma,
                                                    "Noise standard deviation");
    signal_cmd->add_option("--noise", signal_noise, "Noise family: gaussian, rademacher, uniform");
    auto* signal_seed_opt = signal_cmd->add_option("--seed", signal_seed,
                                                   "Noise seed (required unless --clean)");
    signal_cmd->add_option("--format", signal_format, "csv (default) or json");
    signal_cmd->add_option("--out", signal_out, "Output path (default stdout)");

    // metrics
    auto* metrics_cmd = app.add_subcommand("metrics", "Distances between two step functions");
    std::string metrics_a, metrics_b, metrics_out;
    bool want_l2 = false, want_hausdorff = false, want_skorokhod = false;
    metrics_cmd->add_option("a", metrics_a, "First step function (JSON)")->required();
    metrics_cmd->add_option("b", metrics_b, "Second step function (JSON)")->required();
    metrics_cmd->add_flag("--l2", want_l2, "L2 distance");
    metrics_cmd->add_flag("--hausdorff", want_hausdorff, "Jump-set Hausdorff distance");
    metrics_cmd->add_flag("--skorokhod", want_skorokhod, "Skorokhod distance");
    metrics_cmd->add_option("--out", metrics_out, "Output path (default stdout)");

    // bench-rates
    auto* rates_cmd = app.add_subcommand("bench-rates", "Monte Carlo convergence-rate slopes");
    SignalFlags rates_signal;
    add_signal_flags(rates_cmd, rates_signal);
    BenchFlags rates_bench;
    add_bench_flags(rates_cmd, rates_bench);
    std::string rates_metric = "l2";
    rates_cmd->add_option("--metric", rates_metric, "l2, hausdorff, skorokhod, jump_count");

    // bench-recovery
    auto* recovery_cmd = app.add_subcommand("bench-recovery", "Monte Carlo jump recovery");
    SignalFlags recovery_signal;
    add_signal_flags(recovery_cmd, recovery_signal);
    BenchFlags recovery_bench;
    add_bench_flags(recovery_cmd, recovery_bench);

    // bench-cn
    auto* cn_cmd = app.add_subcommand("bench-cn", "Scan statistic of pure noise");
    std::vector<int> cn_ns;
    int cn_reps = 50, cn_threads = 1;
    std::uint64_t cn_seed = 0;
    double cn_sigma = 1.0;
    std::string cn_noise = "gaussian", cn_out, cn_out_csv;
    cn_cmd->add_option("--ns", cn_ns, "Sample sizes, ascending")->required()->delimiter(',');
    cn_cmd->add_option("--reps", cn_reps, "Replicates per n");
    cn_cmd->add_option("--seed", cn_seed, "Base seed")->required();
    cn_cmd->add_option("--sigma", cn_sigma, "Noise standard deviation");
    cn_cmd->add_option("--noise", cn_noise, "Noise family");
    cn_cmd->add_option("--threads", cn_threads, "Worker threads");
    cn_cmd->add_option("--out", cn_out, "Summary JSON path (default stdout)");
    cn_cmd->add_option("--out-csv", cn_out_csv, "Raw replicate table path");

    // figure1
    auto* fig_cmd = app.add_subcommand(
        "figure1", "Four-signal reconstruction bundle at three noise levels");
    std::uint64_t fig_seed = 0;
    std::string fig_out_dir = "figure1_out";
    fig_cmd->add_option("--seed", fig_seed, "Base seed")->required();
    fig_cmd->add_option("--out-dir", fig_out_dir, "Directory for the CSV bundle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (fit_cmd->parsed()) {
        const SampledSignal y = io::read_signal_csv(fit_input);
        potts::Segmentation fit;
        std::optional<selection::MrSelection> sel;
        if (fit_gamma_opt->count() > 0) {
            fit = potts::fit_gamma(y, fit_gamma_val);
        } else if (fit_select == "log") {
            const double sigma_hat = selection::estimate_sigma(y, parse_sigma_spec(fit_sigma));
            const double gamma = selection::log_penalty(y.size(), sigma_hat, fit_c);
            if (!(gamma > 0.0)) {
                throw io::DataError("estimated noise level is 0; pass --gamma explicitly");
            }
            fit = potts::fit_gamma(y, gamma);
        } else if (fit_select == "mr") {
            selection::SelectionConfig sc;
            sc.delta = fit_delta;
            sc.sigma = parse_sigma_spec(fit_sigma);
            sc.interval_family = parse_interval_family(fit_mr_family);
            std::optional<int> cap;
            if (fit_max_jumps_opt->count() > 0) cap = fit_max_jumps;
            sel = selection::mr_select(y, sc, cap);
            fit = sel->fit;
        } else {
            throw std::invalid_argument("--select must be log or mr");
        }
        if (!fit_fitted_csv.empty()) io::write_signal_csv(fit_fitted_csv, fit.fitted_values());
        if (fit_format == "csv") {
            emit(values_csv(fit.fitted_values()), fit_out);
        } else if (fit_format == "json") {
            json j = io::to_json(fit);
            if (sel) j["selection"] = selection_to_json(*sel);
            emit(j.dump(2) + "\n", fit_out);
        } else {
            throw std::invalid_argument("--format must be json or csv");
        }
        return 0;
    }

    if (path_cmd->parsed()) {
        const SampledSignal y = io::read_signal_csv(path_input);
        const int k_max =
            path_k_max_opt->count() > 0 ? path_k_max : std::min(y.size() - 1, 256);
        const potts::SolutionPath p = potts::solve_path(y, k_max);
        emit(io::to_json(p).dump(2) + "\n", path_out);
        return 0;
    }

    if (select_cmd->parsed()) {
        const SampledSignal y = io::read_signal_csv(select_input);
        selection::SelectionConfig sc;
        sc.delta = select_delta;
        sc.sigma = parse_sigma_spec(select_sigma);
        sc.interval_family = parse_interval_family(select_mr_family);
        std::optional<int> cap;
        if (select_max_jumps_opt->count() > 0) cap = select_max_jumps;
        const selection::MrSelection sel = selection::mr_select(y, sc, cap);
        json j = selection_to_json(sel);
        j["fit"] = io::to_json(sel.fit);
        emit(j.dump(2) + "\n", select_out);
        return 0;
    }

    if (signal_cmd->parsed()) {
        const signals::SignalSpec spec = signal_flags.to_spec();
        const SampledSignal clean = signals::generate(spec, signal_n);
        const bool has_snr = signal_snr_opt->count() > 0;
        const bool has_sigma = signal_sigma_opt->count() > 0;
        std::vector<double> values;
        if (signal_clean) {
            if (has_snr || has_sigma)
                throw std::invalid_argument("--clean excludes --snr and --sigma");
            values = clean.values();
        } else {
            if (has_snr && has_sigma)
                throw std::invalid_argument("pass --snr or --sigma, not both");
            if (!has_snr && !has_sigma)
                throw std::invalid_argument("need --clean, --snr, or --sigma");
            if (signal_seed_opt->count() == 0)
                throw std::invalid_argument("noisy output needs an explicit --seed");
            signals::NoiseSpec noise;
            noise.family = parse_noise(signal_noise);
            noise.sigma = has_sigma ? signal_sigma : signals::sigma_for_snr(clean, signal_snr);
            noise.seed = signal_seed;
            values = signals::add_noise(clean, noise).values();
        }
        if (signal_format == "csv") {
            emit(values_csv(values), signal_out);
        } else if (signal_format == "json") {
            emit(json{{"n", signal_n}, {"values", values}}.dump(2) + "\n", signal_out);
        } else {
            throw std::invalid_argument("--format must be csv or json");
        }
        return 0;
    }

    if (metrics_cmd->parsed()) {
        if (!want_l2 && !want_hausdorff && !want_skorokhod) {
            throw std::invalid_argument("pass at least one of --l2, --hausdorff, --skorokhod");
        }
        const StepFunction a = io::read_step_function_json(metrics_a);
        const StepFunction b = io::read_step_function_json(metrics_b);
        json j;
        if (want_l2) j["l2"] = l2_distance(a, b);
        if (want_hausdorff) {
            j["hausdorff"] = metrics::hausdorff(metrics::JumpSet(jump_set(a)),
                                                metrics::JumpSet(jump_set(b)));
        }
        if (want_skorokhod) {
            const metrics::SkorokhodResult r = metrics::skorokhod(a, b);
            j["skorokhod"] = r.distance;
            j["skorokhod_time_term"] = r.time_term;
            j["skorokhod_level_term"] = r.level_term;
        }
        emit(j.dump(2) + "\n", metrics_out);
        return 0;
    }

    if (rates_cmd->parsed()) {
        experiments::RateExperimentConfig cfg;
        cfg.signal = rates_signal.to_spec();
        rates_bench.fill(cfg);
        cfg.metric = parse_metric(rates_metric);
        preflight_writable(rates_bench.out);
        preflight_writable(rates_bench.out_csv);
        const experiments::RateResult res = experiments::run_rate(cfg);
        if (!rates_bench.out_csv.empty()) {
            std::ostringstream out;
            out << "n,replicate,seed,sigma,sigma_hat,gamma,jump_count,value\n";
            for (const auto& r : res.rows) {
                out << r.n << ',' << r.replicate << ',' << r.seed << ','
                    << io::format_double(r.sigma) << ',' << io::format_double(r.sigma_hat) << ','
                    << io::format_double(r.gamma) << ',' << r.jump_count << ','
                    << io::format_double(r.value) << '\n';
            }
            io::write_text_file(rates_bench.out_csv, out.str());
        }
        json j;
        j["metric"] = rates_metric;
        j["points"] = json::array();
        for (const auto& p : res.points) {
            j["points"].push_back({{"n", p.n}, {"mean", p.mean}, {"std_error", p.std_error}});
        }
        j["slope_defined"] = res.slope_defined;
        j["slope"] = nullptr;
        j["intercept"] = nullptr;
        if (res.slope_defined) {
            j["slope"] = res.slope;
            j["intercept"] = res.intercept;
        }
        emit(j.dump(2) + "\n", rates_bench.out);
        return 0;
    }

    if (recovery_cmd->parsed()) {
        experiments::RateExperimentConfig cfg;
        cfg.signal = recovery_signal.to_spec();
        recovery_bench.fill(cfg);
        preflight_writable(recovery_bench.out);
        preflight_writable(recovery_bench.out_csv);
        const experiments::RecoveryResult res = experiments::run_recovery(cfg);
        if (!recovery_bench.out_csv.empty()) {
            std::ostringstream out;
            out << "n,replicate,seed,jump_count,match,hausdorff\n";
            for (const auto& r : res.rows) {
                out << r.n << ',' << r.replicate << ',' << r.seed << ',' << r.jump_count << ','
                    << (r.match ? 1 : 0) << ',' << io::format_double(r.hausdorff) << '\n';
            }
            io::write_text_file(recovery_bench.out_csv, out.str());
        }
        json j;
        j["points"] = json::array();
        for (const auto& p : res.points) {
            j["points"].push_back({{"n", p.n},
                                   {"match_fraction", p.match_fraction},
                                   {"mean_hausdorff", p.mean_hausdorff},
                                   {"mean_scaled_hausdorff", p.mean_scaled_hausdorff}});
        }
        emit(j.dump(2) + "\n", recovery_bench.out);
        return 0;
    }

    if (cn_cmd->parsed()) {
        experiments::CnConfig cfg;
        cfg.n_grid = cn_ns;
        cfg.replicates = cn_reps;
        cfg.noise = parse_noise(cn_noise);
        cfg.sigma = cn_sigma;
        cfg.base_seed = cn_seed;
        cfg.threads = cn_threads;
        preflight_writable(cn_out);
        preflight_writable(cn_out_csv);
        const experiments::CnResult res = experiments::run_cn(cfg);
        if (!cn_out_csv.empty()) {
            std::ostringstream out;
            out << "n,replicate,seed,cn\n";
            for (const auto& r : res.rows) {
                out << r.n << ',' << r.replicate << ',' << r.seed << ','
                    << io::format_double(r.cn) << '\n';
            }
            io::write_text_file(cn_out_csv, out.str());
        }
        json j;
        j["points"] = json::array();
        for (const auto& p : res.points) {
            j["points"].push_back({{"n", p.n},
                                   {"mean", p.mean},
                                   {"median", p.median},
                                   {"q25", p.q25},
                                   {"q75", p.q75}});
        }
        emit(j.dump(2) + "\n", cn_out);
        return 0;
    }

    if (fig_cmd->parsed()) {
        std::filesystem::create_directories(fig_out_dir);
        const std::vector<experiments::Figure1Cell> cells = experiments::run_figure1(fig_seed);
        json summary = json::array();
        for (const auto& c : cells) {
            std::ostringstream snr_tag;
            snr_tag << c.snr;
            const std::string stem = fig_out_dir + "/" + c.family + "_snr" + snr_tag.str();
            io::write_signal_csv(stem + "_clean.csv", c.clean);
            io::write_signal_csv(stem + "_noisy.csv", c.noisy);
            io::write_signal_csv(stem + "_fit.csv", c.fit.fitted_values());
            summary.push_back({{"family", c.family},
                               {"snr", c.snr},
                               {"n", c.n},
                               {"seed", c.seed},
                               {"sigma", c.sigma},
                               {"sigma_hat", c.sigma_hat},
                               {"gamma", c.gamma},
                               {"jump_count", c.fit.jump_count()}});
        }
        io::write_text_file(fig_out_dir + "/summary.json", summary.dump(2) + "\n");
        return 0;
    }

    throw std::logic_error("no subcommand dispatched");
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const stepfit::io::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
