#pragma once

// Counter-based deterministic random numbers.
//
// Each draw is a pure function of (seed, counter): the counter is pushed
// through an affine sequence keyed by the seed and finished with the
// SplitMix64 mixer (Steele, Lea & Flood 2014).  There is no hidden state,
// so replicates can be generated independently and in any order while
// staying bit-reproducible across platforms and thread counts.

#include <cmath>
#include <cstdint>

namespace stepfit {

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t word(std::uint64_t counter) const {
        std::uint64_t z = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on the open interval (0,1); never returns an endpoint.
    double uniform01(std::uint64_t counter) const {
        return (static_cast<double>(word(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; consumes two counter slots per draw,
    // so distinct draws must use distinct `counter` values.
    double normal(std::uint64_t counter) const {
        const double u1 = uniform01(2 * counter);
        const double u2 = uniform01(2 * counter + 1);
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // +1 or -1 with equal probability.
    double rademacher(std::uint64_t counter) const {
        return (word(counter) >> 63) ? 1.0 : -1.0;
    }

private:
    std::uint64_t seed_;
};

} // namespace stepfit
