#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "stepfit/signal.hpp"
#include "stepfit/signals.hpp"

using namespace stepfit;
using namespace stepfit::signals;

namespace {

int adjacent_changes(const SampledSignal& y) {
    int c = 0;
    for (int i = 1; i < y.size(); ++i)
        if (y[i + 1] != y[i]) ++c;
    return c;
}

} // namespace

TEST_CASE("step family renders exact cell averages") {
    SignalSpec spec;
    spec.family = Family::step;
    spec.jumps = {0.5};
    spec.levels = {0.0, 1.0};

    SUBCASE("grid-aligned jump gives the levels verbatim") {
        SampledSignal y = generate(spec, 8);
        for (int i = 1; i <= 4; ++i) CHECK(y[i] == 0.0);
        for (int i = 5; i <= 8; ++i) CHECK(y[i] == 1.0);
    }

    SUBCASE("a jump inside a cell averages the two levels") {
        // n = 3: the jump at 0.5 splits cell [1/3, 2/3) in half.
        SampledSignal y = generate(spec, 3);
        CHECK(y[1] == 0.0);
        CHECK(y[2] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(y[3] == 1.0);
    }

    SUBCASE("invalid specs are rejected") {
        SignalSpec bad = spec;
        bad.levels = {0.0};
        CHECK_THROWS_AS(generate(bad, 8), std::invalid_argument);
        bad = spec;
        bad.jumps = {0.7, 0.3};
        bad.levels = {0.0, 1.0, 2.0};
        CHECK_THROWS_AS(generate(bad, 8), std::invalid_argument);
    }
}

TEST_CASE("ramp family is the identity sampled at cell midpoints") {
    SignalSpec spec;
    spec.family = Family::lipschitz_ramp;
    SampledSignal y = generate(spec, 10);
    for (int i = 1; i <= 10; ++i)
        CHECK(y[i] == doctest::Approx((i - 0.5) / 10.0).epsilon(1e-15));
}

TEST_CASE("holder family has the advertised modulus of continuity") {
    SignalSpec spec;
    spec.family = Family::holder;
    spec.alpha = 0.5;
    const int n = 512;
    SampledSignal y = generate(spec, n);
    // Estimate sup |f(s)-f(t)| / |s-t|^alpha over sampled pairs at several
    // scales; it must be bounded, and the function must not be Lipschitz
    // (the quotient at the finest scale blows past any fixed slope).
    double quot = 0.0;
    for (int gap : {1, 4, 16, 64}) {
        for (int i = 1; i + gap <= n; ++i) {
            const double ds = std::fabs(y[i + gap] - y[i]);
            quot = std::max(quot, ds / std::pow(gap / static_cast<double>(n), spec.alpha));
        }
    }
    CHECK(quot < 10.0);

    SUBCASE("but it is not Lipschitz: the worst slope grows with n") {
        auto steepest = [](const SampledSignal& s) {
            double m = 0.0;
            for (int i = 1; i < s.size(); ++i)
                m = std::max(m, std::fabs(s[i + 1] - s[i]) * s.size());
            return m;
        };
        const double coarse = steepest(generate(spec, 128));
        const double fine = steepest(generate(spec, 8192));
        CHECK(fine > 4.0 * coarse);
    }

    SUBCASE("exponent is validated") {
        spec.alpha = 0.0;
        CHECK_THROWS_AS(generate(spec, 16), std::invalid_argument);
        spec.alpha = 1.5;
        CHECK_THROWS_AS(generate(spec, 16), std::invalid_argument);
    }
}

TEST_CASE("bounded variation example mixes a ramp with four stairs") {
    SignalSpec spec;
    spec.family = Family::bv_example;
    const int n = 1000;
    SampledSignal y = generate(spec, n);
    // Monotone increasing, total variation y_n - y_1 close to 1.
    double tv = 0.0;
    for (int i = 1; i < n; ++i) {
        CHECK(y[i + 1] >= y[i]);
        tv += y[i + 1] - y[i];
    }
    CHECK(tv == doctest::Approx(1.0).epsilon(0.01));
    // Four jumps of height 1/8 on top of slope 1/2: the gap over a stair
    // cell is 1/8 + 1/(2n), an ordinary cell moves by 1/(2n).
    int stairs = 0;
    for (int i = 1; i < n; ++i)
        if (y[i + 1] - y[i] > 0.1) ++stairs;
    CHECK(stairs == 4);
}

TEST_CASE("benchmark families have their standard shapes") {
    SUBCASE("blocks is piecewise constant with eleven jumps") {
        SampledSignal y = generate({Family::blocks, {}, {}, 0.5}, 2048);
        CHECK(adjacent_changes(y) == 11);
    }

    SUBCASE("bumps is nonnegative and spiky") {
        SampledSignal y = generate({Family::bumps, {}, {}, 0.5}, 2048);
        double lo = 1e300, hi = -1e300;
        for (int i = 1; i <= y.size(); ++i) {
            lo = std::min(lo, y[i]);
            hi = std::max(hi, y[i]);
        }
        CHECK(lo >= 0.0);
        CHECK(hi > 3.0);
    }

    SUBCASE("heavisine spans its sine envelope shifted by the two signs") {
        SampledSignal y = generate({Family::heavisine, {}, {}, 0.5}, 2048);
        double hi = -1e300, lo = 1e300;
        for (int i = 1; i <= y.size(); ++i) {
            hi = std::max(hi, y[i]);
            lo = std::min(lo, y[i]);
        }
        // Peak 4 sin outside the sign dip, trough 4 sin - 2 inside it.
        CHECK(hi == doctest::Approx(4.0).epsilon(0.01));
        CHECK(lo == doctest::Approx(-6.0).epsilon(0.01));
    }

    SUBCASE("doppler oscillates with increasing wavelength") {
        SampledSignal y = generate({Family::doppler, {}, {}, 0.5}, 2048);
        // Phase sweeps about twenty periods across [0,1].
        int sign_changes = 0;
        for (int i = 1; i < y.size(); ++i)
            if ((y[i] > 0) != (y[i + 1] > 0)) ++sign_changes;
        CHECK(sign_changes > 30);
        CHECK(sign_changes < 50);
    }
}

TEST_CASE("noise draws are deterministic in the seed") {
    SampledSignal f = generate({Family::blocks, {}, {}, 0.5}, 256);
    NoiseSpec spec{NoiseFamily::gaussian, 0.5, 12345u};
    SampledSignal a = add_noise(f, spec);
    SampledSignal b = add_noise(f, spec);
    for (int i = 1; i <= 256; ++i) CHECK(a[i] == b[i]);

    spec.seed = 12346u;
    SampledSignal c = add_noise(f, spec);
    int diffs = 0;
    for (int i = 1; i <= 256; ++i)
        if (a[i] != c[i]) ++diffs;
    CHECK(diffs > 200);

    SUBCASE("add_noise is plain addition of the same stream") {
        std::vector<double> xi = draw_noise(256, {NoiseFamily::gaussian, 0.5, 12345u});
        for (int i = 1; i <= 256; ++i)
            CHECK(a[i] == f[i] + xi[static_cast<std::size_t>(i - 1)]);
    }
}

TEST_CASE("noise families have the right scale and support") {
    const int n = 100000;

    SUBCASE("gaussian moments") {
        std::vector<double> xi = draw_noise(n, {NoiseFamily::gaussian, 2.0, 5u});
        double mean = 0.0, sq = 0.0;
        for (double x : xi) {
            mean += x;
            sq += x * x;
        }
        mean /= n;
        sq /= n;
        CHECK(std::fabs(mean) < 0.03);
        CHECK(std::sqrt(sq) == doctest::Approx(2.0).epsilon(0.02));
    }

    SUBCASE("rademacher is a fair sign flip scaled by sigma") {
        std::vector<double> xi = draw_noise(n, {NoiseFamily::rademacher, 1.5, 6u});
        int plus = 0;
        for (double x : xi) {
            CHECK(std::fabs(x) == 1.5);
            if (x > 0) ++plus;
        }
        CHECK(plus > 49000);
        CHECK(plus < 51000);
    }

    SUBCASE("uniform is centered with sd sigma and bounded support") {
        std::vector<double> xi = draw_noise(n, {NoiseFamily::uniform, 1.0, 7u});
        const double bound = std::sqrt(3.0) + 1e-12;
        double sq = 0.0;
        for (double x : xi) {
            CHECK(std::fabs(x) <= bound);
            sq += x * x;
        }
        CHECK(std::sqrt(sq / n) == doctest::Approx(1.0).epsilon(0.02));
    }

    SUBCASE("tail parameter is positive and scales with sigma") {
        NoiseSpec a{NoiseFamily::gaussian, 1.0, 0u};
        NoiseSpec b{NoiseFamily::gaussian, 2.0, 0u};
        CHECK(a.beta() > 0.0);
        CHECK(b.beta() > a.beta());
    }
}

TEST_CASE("signal-to-noise calibration inverts the ratio exactly") {
    SignalSpec spec;
    spec.family = Family::step;
    spec.jumps = {0.25, 0.5, 0.75};
    spec.levels = {0.0, 1.0, -0.5, 0.8};
    SampledSignal f = generate(spec, 1024);
    // ||f||^2 = 0.25*(0 + 1 + 0.25 + 0.64) = 0.4725.
    const double sigma = sigma_for_snr(f, 7.0);
    CHECK(sigma == doctest::Approx(std::sqrt(0.4725 / 7.0)).epsilon(1e-12));
    CHECK_THROWS_AS(sigma_for_snr(f, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sigma_for_snr(f, -1.0), std::invalid_argument);
}
