#include "stepfit/signals.hpp"

#include <cmath>
#include <stdexcept>

#include "stepfit/rng.hpp"
#include "stepfit/step_function.hpp"

namespace stepfit::signals {

namespace {

// Knots, step heights, bump heights and bump widths of the standard
// Donoho-Johnstone blocks/bumps test signals (1994 test suite).
constexpr double kDjPos[11] = {0.10, 0.13, 0.15, 0.23, 0.25, 0.40,
                               0.44, 0.65, 0.76, 0.78, 0.81};
constexpr double kBlocksHgt[11] = {4.0, -5.0, 3.0, -4.0, 5.0, -4.2,
                                   2.1, 4.3, -3.1, 2.1, -4.2};
constexpr double kBumpsHgt[11] = {4.0, 5.0, 3.0, 4.0, 5.0, 4.2,
                                  2.1, 4.3, 3.1, 5.1, 4.2};
constexpr double kBumpsWth[11] = {0.005, 0.005, 0.006, 0.01, 0.01, 0.03,
                                  0.01,  0.01,  0.005, 0.008, 0.005};

constexpr double kPi = 3.14159265358979323846;

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double blocks_at(double t) {
    double v = 0.0;
    for (int j = 0; j < 11; ++j) v += kBlocksHgt[j] * (1.0 + sgn(t - kDjPos[j])) / 2.0;
    return v;
}

double bumps_at(double t) {
    double v = 0.0;
    for (int j = 0; j < 11; ++j) {
        const double z = std::fabs((t - kDjPos[j]) / kBumpsWth[j]);
        v += kBumpsHgt[j] * std::pow(1.0 + z, -4.0);
    }
    return v;
}

double heavisine_at(double t) {
    return 4.0 * std::sin(4.0 * kPi * t) - sgn(t - 0.3) - sgn(0.72 - t);
}

double doppler_at(double t) {
    return std::sqrt(t * (1.0 - t)) * std::sin(2.0 * kPi * 1.05 / (t + 0.05));
}

// Monotone staircase-plus-ramp of total variation exactly 1: slope-1/2 ramp
// plus four jumps of height 1/8 at 0.2, 0.4, 0.6, 0.8.
double bv_example_at(double t) {
    double stairs = 0.0;
    for (int j = 1; j <= 4; ++j)
        if (t >= 0.2 * j) stairs += 0.125;
    return 0.5 * t + stairs;
}

SampledSignal midpoint_samples(int n, double (*f)(double)) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) v.push_back(f((i - 0.5) / n));
    return SampledSignal(std::move(v));
}

} // namespace

double NoiseSpec::beta() const {
    switch (family) {
    case NoiseFamily::gaussian:
        return sigma * sigma / 2.0;
    case NoiseFamily::rademacher: {
        const double range = 2.0 * sigma;
        return range * range / 2.0;
    }
    case NoiseFamily::uniform: {
        const double range = 2.0 * std::sqrt(3.0) * sigma;
        return range * range / 2.0;
    }
    }
    throw std::invalid_argument("NoiseSpec: unknown family");
}

SampledSignal generate(const SignalSpec& spec, int n) {
    if (n < 1) throw std::invalid_argument("generate: need n >= 1");
    switch (spec.family) {
    case Family::blocks:
        return midpoint_samples(n, blocks_at);
    case Family::bumps:
        return midpoint_samples(n, bumps_at);
    case Family::heavisine:
        return midpoint_samples(n, heavisine_at);
    case Family::doppler:
        return midpoint_samples(n, doppler_at);
    case Family::lipschitz_ramp:
        return midpoint_samples(n, [](double t) { return t; });
    case Family::bv_example:
        return midpoint_samples(n, bv_example_at);
    case Family::holder: {
        if (!(spec.alpha > 0.0) || !(spec.alpha <= 1.0))
            throw std::invalid_argument("generate: holder exponent must lie in (0,1]");
        std::vector<double> v;
        v.reserve(static_cast<std::size_t>(n));
        for (int i = 1; i <= n; ++i) v.push_back(std::pow((i - 0.5) / n, spec.alpha));
        return SampledSignal(std::move(v));
    }
    case Family::step: {
        StepFunction f(spec.jumps, spec.levels);
        std::vector<double> v;
        v.reserve(static_cast<std::size_t>(n));
        for (int i = 1; i <= n; ++i)
            v.push_back(mean_on_interval(
                f, Interval(static_cast<double>(i - 1) / n, static_cast<double>(i) / n)));
        return SampledSignal(std::move(v));
    }
    }
    throw std::invalid_argument("generate: unknown family");
}

std::vector<double> draw_noise(int n, const NoiseSpec& noise) {
    if (n < 1) throw std::invalid_argument("draw_noise: need n >= 1");
    if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma))
        throw std::invalid_argument("draw_noise: sigma must be finite and >= 0");
    CounterRng rng(noise.seed);
    std::vector<double> xi;
    xi.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double z = 0.0;
        switch (noise.family) {
        case NoiseFamily::gaussian:
            z = rng.normal(static_cast<std::uint64_t>(i));
            break;
        case NoiseFamily::rademacher:
            z = rng.rademacher(static_cast<std::uint64_t>(i));
            break;
        case NoiseFamily::uniform:
            z = (rng.uniform01(static_cast<std::uint64_t>(i)) - 0.5) * 2.0 * std::sqrt(3.0);
            break;
        }
        xi.push_back(noise.sigma * z);
    }
    return xi;
}

SampledSignal add_noise(const SampledSignal& f, const NoiseSpec& noise) {
    std::vector<double> xi = draw_noise(f.size(), noise);
    for (int i = 0; i < f.size(); ++i) xi[static_cast<std::size_t>(i)] += f[i + 1];
    return SampledSignal(std::move(xi));
}

double sigma_for_snr(const SampledSignal& f, double snr) {
    if (!(snr > 0.0)) throw std::invalid_argument("sigma_for_snr: snr must be positive");
    long double sq = 0.0L;
    for (int i = 1; i <= f.size(); ++i) sq += static_cast<long double>(f[i]) * f[i];
    const double norm_sq = static_cast<double>(sq / f.size());
    return std::sqrt(norm_sq / snr);
}

} // namespace stepfit::signals
