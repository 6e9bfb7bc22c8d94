#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "zcjitter/decomposition.hpp"
#include "zcjitter/error.hpp"
#include "zcjitter/synthesis.hpp"
#include "zcjitter/zca.hpp"

using namespace zcjitter;
using zcjitter::testing::tone_buffer;

namespace {

AnalysisConfig quarter_second() {
    AnalysisConfig c;
    c.block = 12000;
    c.oversample = 16;
    return c;
}

} // namespace

TEST_SUITE("zca") {

TEST_CASE("linear interpolation places the crossing at the midpoint") {
    const std::vector<double> fine{-1.0, 1.0, 2.0, -2.0, -1.0};
    const auto c = find_zero_crossings(fine, 1.0, 10.0, 10.0, 14.0);
    REQUIRE(c.times.size() == 2);
    CHECK(c.times[0] == doctest::Approx(10.5));
    CHECK(c.times[1] == doctest::Approx(12.5));
    CHECK(c.first == Parity::rising);
}

TEST_CASE("exact zero samples count once at the zero sample") {
    const std::vector<double> fine{-1.0, 0.0, 1.0, 0.0, 0.0, -2.0, 0.0, -1.0};
    const auto c = find_zero_crossings(fine, 1.0, 0.0, 0.0, 7.0);
    REQUIRE(c.times.size() == 2);
    CHECK(c.times[0] == 1.0);
    CHECK(c.times[1] == 3.0);
    CHECK(c.first == Parity::rising);
}

TEST_CASE("fewer than two crossings is an insufficient-signal error") {
    const std::vector<double> fine{1.0, 2.0, 3.0, -1.0};
    try {
        find_zero_crossings(fine, 1.0, 0.0, 0.0, 3.0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::insufficient_signal);
    }
}

TEST_CASE("grid fit of an exact line") {
    std::vector<double> s(1000);
    for (std::size_t k = 0; k < s.size(); ++k) {
        s[k] = 0.001 + static_cast<double>(k) / 24000.0;
    }
    const auto series = make_series(s, Parity::falling);
    CHECK(series.carrier == doctest::Approx(12000.0).epsilon(1e-12));
    for (const double d : series.delta) {
        REQUIRE(std::abs(d) < 1e-16);
    }
    CHECK(series.monotonic);
    s[10] = s[9];
    CHECK_FALSE(fit_ideal_grid(s).monotonic);
}

TEST_CASE("noise-free 12 kHz tone over 1 s") {
    const double phase = 0.1234;
    const auto buffer = tone_buffer(12000.0, 0.9, 6 * 48000, 192000.0, phase);
    AnalysisConfig config;
    config.carrier_nominal = 12000.0;
    const auto z = compute_zcf(buffer, config, 48000);
    CHECK(z.size() == 24000);
    CHECK(z.carrier == doctest::Approx(12000.0).epsilon(1e-9));
    // Analytic zeros of cos(wt + phase).
    double worst = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        const double n = std::round((kTwoPi * 12000.0 * z.s[k] + phase - kPi / 2.0) / kPi);
        const double t = (kPi / 2.0 + n * kPi - phase) / (kTwoPi * 12000.0);
        worst = std::max(worst, std::abs(z.s[k] - t));
    }
    CHECK(to_ps(worst) < 1.0);
    SUBCASE("parity convention") {
        // sign(k) is +1 on rising crossings.
        const double slope_sign = -std::sin(kTwoPi * 12000.0 * z.s[0] + phase);
        CHECK(z.sign(0) == (slope_sign > 0 ? 1.0 : -1.0));
        CHECK(z.sign(1) == -z.sign(0));
    }
}

TEST_CASE("fitted frequency resolves a 1 ppm offset") {
    const double f = 12000.0 * (1.0 + 1e-6);
    const auto buffer = tone_buffer(f, 0.9, 6 * 12000, 192000.0, 0.5);
    auto config = quarter_second();
    config.carrier_nominal = 12000.0;
    const auto z = compute_zcf(buffer, config, 12000);
    const double ppm = (z.carrier / 12000.0 - 1.0) * 1e6;
    CHECK(std::abs(ppm - 1.0) < 0.01);
}

TEST_CASE("ZCF definition and residual orthogonality") {
    DummySpec spec;
    spec.length = 6 * 12000;
    const auto buffer = synthesize_dummy_waveform(spec, make_dummy_traces(spec)).buffer;
    const auto z = compute_zcf(buffer, quarter_second(), 12000);
    REQUIRE(z.s.size() == z.s_prime.size());
    REQUIRE(z.delta.size() == z.s.size());
    // Normal equations of the grid fit, in absolute-time units.
    double sum = 0.0;
    double moment = 0.0;
    double scale = 0.0;
    const double k_mean = static_cast<double>(z.size() - 1) / 2.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        REQUIRE(z.delta[k] == z.s_prime[k] - z.s[k]);
        const double dk = static_cast<double>(k) - k_mean;
        sum += z.delta[k];
        moment += dk * z.delta[k];
        scale += std::abs(dk) * z.s[k];
    }
    const double m = static_cast<double>(z.size());
    CHECK(std::abs(sum) / (m * z.s.back()) < 1e-12);
    CHECK(std::abs(moment) / scale < 1e-12);
    // Ideal grid: constant spacing 1 / (2 f), strictly increasing.
    const double spacing = 1.0 / (2.0 * z.carrier);
    for (std::size_t k = 1; k < z.size(); ++k) {
        REQUIRE(z.s_prime[k] - z.s_prime[k - 1] == doctest::Approx(spacing).epsilon(1e-9));
    }
    // Crossing count matches 2 f T within one crossing.
    CHECK(std::abs(static_cast<double>(z.size()) - 2.0 * z.carrier * 0.25) <= 1.0);
}

TEST_CASE("crossings are invariant to scaling the input") {
    DummySpec spec;
    spec.length = 6 * 12000;
    spec.amplitude_ratio = 0.2;
    const auto base = synthesize_dummy_waveform(spec, make_dummy_traces(spec)).buffer;
    auto config = quarter_second();
    config.carrier_nominal = spec.carrier;
    const auto z1 = compute_zcf(base, config, 12000);
    for (const int factor : {2, 4}) {
        SampleBuffer scaled = base;
        for (auto& v : scaled.samples) {
            v *= factor;
        }
        const auto z = compute_zcf(scaled, config, 12000);
        CHECK(z.s == z1.s);
        CHECK(z.s_prime == z1.s_prime);
        CHECK(z.delta == z1.delta);
    }
}

TEST_CASE("sinusoidal jitter inside the analysis band is recovered") {
    DummySpec spec;
    spec.length = 6 * 12000;
    spec.enable_jitter = false;
    auto config = quarter_second();
    const double amplitude = 100e-12;
    for (const double fj : {40.0, 1000.0, 3000.0}) {
        auto traces = NoiseTraces::zeros(spec.length, spec.sample_rate);
        for (std::size_t i = 0; i < spec.length; ++i) {
            traces.j[i] = amplitude * std::sin(kTwoPi * fj * static_cast<double>(i) / spec.sample_rate);
        }
        const auto buffer = synthesize_dummy_waveform(spec, traces).buffer;
        const auto z = compute_zcf(buffer, config, 12000);
        // Least-squares amplitude of the ZCF at fj (ZCF equals j at the ideal crossings).
        double ss = 0.0, cc = 0.0, sc = 0.0, ys = 0.0, yc = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            const double s = std::sin(kTwoPi * fj * z.s_prime[k]);
            const double c = std::cos(kTwoPi * fj * z.s_prime[k]);
            ss += s * s;
            cc += c * c;
            sc += s * c;
            ys += z.delta[k] * s;
            yc += z.delta[k] * c;
        }
        const double det = ss * cc - sc * sc;
        const double a = (ys * cc - yc * sc) / det;
        const double b = (yc * ss - ys * sc) / det;
        CAPTURE(fj);
        CHECK(std::hypot(a, b) == doctest::Approx(amplitude).epsilon(0.05));
    }
}

TEST_CASE("alignment of identical and shifted series") {
    DummySpec spec;
    spec.length = 6 * 12000;
    const auto buffer = synthesize_dummy_waveform(spec, make_dummy_traces(spec)).buffer;
    const auto z = compute_zcf(buffer, quarter_second(), 12000);

    SUBCASE("identical series stay identical") {
        const auto [a, b] = align_crossings(z, z, 0.0, 0.0);
        CHECK(a.s == b.s);
        for (std::size_t k = 0; k < a.size(); ++k) {
            REQUIRE(a.delta[k] - b.delta[k] == 0.0);
        }
    }
    SUBCASE("a series starting one cycle later is re-indexed by two crossings") {
        std::vector<double> later(z.s.begin() + 2, z.s.end());
        const auto shifted = make_series(later, z.parity(2), z.amplitude);
        const auto [a, b] = align_crossings(z, shifted, 0.0, 0.0);
        REQUIRE(a.size() == z.size() - 2);
        CHECK(a.s.front() == z.s[2]);
        CHECK(a.s == b.s);
    }
    SUBCASE("a half-cycle offset keeps parity consistent") {
        std::vector<double> later(z.s.begin() + 1, z.s.end());
        const auto shifted = make_series(later, z.parity(1), z.amplitude);
        const auto [a, b] = align_crossings(z, shifted, 0.0, 0.0);
        CHECK(a.first_parity == b.first_parity);
        CHECK(a.s == b.s);
    }
    SUBCASE("a dropped crossing is a synchronization error") {
        std::vector<double> gap(z.s.begin(), z.s.end());
        gap.erase(gap.begin() + static_cast<std::ptrdiff_t>(gap.size() / 2));
        const auto broken = make_series(gap, z.first_parity, z.amplitude);
        try {
            align_crossings(z, broken, 0.0, 0.0);
            FAIL("expected a synchronization error");
        } catch (const Error& e) {
            CHECK(e.category() == ErrorCategory::synchronization);
        }
    }
}

TEST_CASE("window planning and coverage") {
    DummySpec spec;
    spec.length = 6 * 12000;
    const auto buffer = synthesize_dummy_waveform(spec, make_dummy_traces(spec)).buffer;
    const auto config = quarter_second();
    const auto spans = plan_windows(buffer, config, spec.carrier, 1);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0] >= 12000);
    CHECK_THROWS_AS(plan_windows(buffer, config, spec.carrier, 2), Error);
    try {
        compute_zcf(buffer, config, 30000);
        FAIL("expected a coverage error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::coverage);
    }
}

TEST_CASE("window reaching into silence is a coverage error") {
    auto buffer = tone_buffer(12000.0, 0.9, 6 * 12000);
    std::fill(buffer.samples.begin(), buffer.samples.begin() + 12000, 0);
    try {
        compute_zcf(buffer, quarter_second(), 12000);
        FAIL("expected a coverage error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::coverage);
    }
}

TEST_CASE("onset detection and main part") {
    auto buffer = tone_buffer(12000.0, 0.9, 96000);
    const std::size_t silence = 20011;
    std::fill(buffer.samples.begin(), buffer.samples.begin() + silence, 0);
    for (std::size_t i = silence; i < silence + 20000; ++i) {
        buffer.samples[i] /= 1000; // quiet lead-in at 0.1 % of full level
    }
    const auto rms = running_rms(buffer, 64);
    CHECK(rms.back() == doctest::Approx(0.9 / std::sqrt(2.0)).epsilon(0.01));
    const double onset = detect_onset(buffer, 12000.0, 0.0005);
    CHECK(std::abs(onset * 192000.0 - static_cast<double>(silence)) <= 1.0);
    const auto part = find_main_part(buffer, 12000.0);
    CHECK(part.first >= silence + 20000 - 64);
    CHECK(part.first <= silence + 20000);
    CHECK(part.last == buffer.size() - 1);
}

} // TEST_SUITE
