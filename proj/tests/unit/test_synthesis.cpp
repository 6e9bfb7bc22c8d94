#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "zcjitter/dsp.hpp"
#include "zcjitter/error.hpp"
#include "zcjitter/rng.hpp"
#include "zcjitter/synthesis.hpp"

using namespace zcjitter;
using zcjitter::testing::rms_of;

TEST_SUITE("synthesis") {

TEST_CASE("default playback waveform hits the documented sample values") {
    const PlaybackSpec spec;
    const auto v = generate_playback_waveform(spec);
    REQUIRE(v.size() == 2 * spec.i_main + spec.main_length);
    const auto at = [&](std::size_t one_based) { return v.samples[one_based - 1]; };
    CHECK(at(spec.i_main) == 8388607);
    CHECK(at(spec.i_main + 1) == 0);
    CHECK(at(spec.i_main + 2) == -8388607);
    CHECK(at(spec.i_main + 3) == 0);
    CHECK(at(1) == 0);
    CHECK(at(spec.i_main - spec.fade_length) == 256);
    CHECK(playback_envelope(spec, static_cast<double>(spec.i_main - spec.fade_length / 2)) ==
          doctest::Approx(256.0 + (8388607.0 - 256.0) / 2.0));
    // Fade-out mirrors the fade-in around the main part.
    const std::size_t first_out = spec.i_main + spec.main_length;
    CHECK(std::abs(at(first_out + 3)) == std::abs(at(spec.i_main - 4)));
    CHECK(at(v.size()) == 0);
}

TEST_CASE("playback spec validation") {
    PlaybackSpec bad;
    bad.fade_length = bad.i_main;
    CHECK_THROWS_AS(validate(bad), Error);
    bad = PlaybackSpec{};
    bad.main_length = 0;
    CHECK_THROWS_AS(generate_playback_waveform(bad), Error);
}

TEST_CASE("gaussian source is seeded and standard normal") {
    GaussianSource a(7, 1);
    GaussianSource b(7, 1);
    GaussianSource c(7, 2);
    const auto xa = a.draw(200000);
    const auto xb = b.draw(200000);
    const auto xc = c.draw(10);
    CHECK(xa == xb);
    CHECK(xa[0] != xc[0]);
    CHECK(zcjitter::testing::mean_of(xa) == doctest::Approx(0.0).epsilon(0.01));
    CHECK(rms_of(xa) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("band-limited noise keeps the expected RMS") {
    const std::size_t n = 1 << 20;
    const double rate = 192000.0;
    SUBCASE("low-pass 6 kHz reduces 160 ps to 40 ps") {
        const auto x = make_bandlimited_noise(n, rate, 160e-12, {0.0, 6000.0}, 3, 1);
        CHECK(to_ps(rms_of(x)) == doctest::Approx(40.0).epsilon(0.02));
    }
    SUBCASE("full band is the identity up to statistics") {
        const auto x = make_bandlimited_noise(n, rate, 1.0, {0.0, rate / 2.0}, 3, 1);
        CHECK(rms_of(x) == doctest::Approx(1.0).epsilon(0.01));
    }
    SUBCASE("band-pass of half width 6 kHz keeps sqrt(2) more") {
        const auto x = make_bandlimited_noise(n, rate, 160.0, {12000.0 - 6000.0, 12000.0 + 6000.0}, 3, 3);
        CHECK(rms_of(x) == doctest::Approx(40.0 * std::sqrt(2.0)).epsilon(0.02));
    }
    SUBCASE("RMS ratio follows the band fraction") {
        for (const FrequencyBand band : {FrequencyBand{0.0, 3000.0}, FrequencyBand{20000.0, 50000.0}}) {
            const auto x = make_bandlimited_noise(n, rate, 1.0, band, 9, 4);
            CHECK(rms_of(x) == doctest::Approx(std::sqrt(band_fraction(band, rate))).epsilon(0.03));
        }
    }
    SUBCASE("band outside Nyquist is rejected") {
        CHECK_THROWS_AS(make_bandlimited_noise(1000, rate, 1.0, {0.0, rate}, 1), Error);
    }
}

TEST_CASE("band limiting is idempotent") {
    const auto x = make_bandlimited_noise(1 << 16, 192000.0, 1.0, {6000.0, 18000.0}, 5);
    const auto y = band_limit(x, 192000.0, {6000.0, 18000.0});
    double err = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        err = std::max(err, std::abs(x[i] - y[i]));
    }
    CHECK(err / rms_of(x) < 1e-12);
}

TEST_CASE("noise-free dummy sample values") {
    DummySpec spec;
    spec.enable_jitter = false;
    spec.length = 20000;
    const auto result = synthesize_dummy_waveform(spec, make_dummy_traces(spec));
    CHECK(result.buffer.samples[0] == 7549746);
    const auto peak = std::ceil(0.9 * 8388607.0);
    for (const auto s : result.buffer.samples) {
        REQUIRE(std::abs(static_cast<double>(s)) <= peak);
    }
    CHECK(result.clipped == 0);
}

TEST_CASE("dummy quantisation re-derives every stored sample") {
    DummySpec spec;
    spec.length = 4096;
    spec.enable_am = true;
    spec.enable_pi = true;
    const auto traces = make_dummy_traces(spec);
    const auto result = synthesize_dummy_waveform(spec, traces);
    const double x_max = 8388607.0;
    const double w = kTwoPi * spec.carrier;
    for (std::size_t i = 0; i < spec.length; ++i) {
        const double t = static_cast<double>(i) / spec.sample_rate;
        const double c = std::cos(w * t);
        const double s = std::sin(w * t);
        const double value = 0.9 * c - 0.9 * w * traces.j[i] * s + traces.a_m[i] * c + traces.n_pi[i];
        REQUIRE(result.buffer.samples[i] == static_cast<std::int32_t>(std::floor(x_max * value)));
    }
}

TEST_CASE("dummy synthesis saturates and counts clipped samples") {
    DummySpec spec;
    spec.amplitude_ratio = 1.0;
    spec.enable_jitter = false;
    spec.length = 1000;
    auto traces = make_dummy_traces(spec);
    traces.a_total.assign(spec.length, 0.5);
    const auto result = synthesize_dummy_waveform(spec, traces);
    CHECK(result.clipped > 0);
    CHECK(*std::max_element(result.buffer.samples.begin(), result.buffer.samples.end()) == 8388607);
}

TEST_CASE("seeded dummies are bit-identical") {
    DummySpec spec;
    spec.length = 50000;
    spec.enable_pi = true;
    const auto a = synthesize_dummy_waveform(spec, make_dummy_traces(spec)).buffer;
    const auto b = synthesize_dummy_waveform(spec, make_dummy_traces(spec)).buffer;
    CHECK(a.samples == b.samples);
    spec.seed = 2;
    const auto c = synthesize_dummy_waveform(spec, make_dummy_traces(spec)).buffer;
    CHECK(a.samples != c.samples);
}

TEST_CASE("noise-free recording of the main part is a 12 kHz tone at 16 samples per cycle") {
    PlayerSignal player;
    player.playback = PlaybackSpec{48000.0, 24, 4800, 2400, 48000, 256};
    RecorderSetup setup;
    setup.start_time = -0.01;
    setup.length = static_cast<std::size_t>(1.3 * 192000.0);
    const auto rec = simulate_recording(player, NoiseTraces{}, setup).buffer;
    CHECK(player.carrier() == doctest::Approx(12000.0));
    // Inside the main part the recording repeats every 16 samples.
    const std::size_t i0 = static_cast<std::size_t>((player.main_start_time() + 0.05 - setup.start_time) * 192000.0);
    for (std::size_t i = i0; i < i0 + 1600; ++i) {
        REQUIRE(std::abs(rec.samples[i] - rec.samples[i + 16]) <= 1);
    }
    const auto spectrum_peak = estimate_carrier(rec.to_full_scale(i0, 48000), 192000.0);
    CHECK(spectrum_peak == doctest::Approx(12000.0).epsilon(1e-6));
    // Silent part before the fade-in records as exact zeros.
    for (std::size_t i = 0; i < 100; ++i) {
        REQUIRE(rec.samples[i] == 0);
    }
}

TEST_CASE("recording must cover the main part") {
    PlayerSignal player;
    player.playback = PlaybackSpec{48000.0, 24, 4800, 2400, 48000, 256};
    RecorderSetup setup;
    setup.start_time = 0.5;
    setup.length = 1000;
    CHECK_THROWS_AS(simulate_recording(player, NoiseTraces{}, setup), Error);
}

TEST_CASE("cubic trace interpolation is exact on the grid and zero outside") {
    const std::vector<double> trace{0.0, 1.0, 4.0, 9.0, 16.0, 25.0};
    CHECK(interpolate_trace(trace, 10.0, 0.0, 0.3) == doctest::Approx(9.0));
    CHECK(interpolate_trace(trace, 10.0, 0.0, 0.25) == doctest::Approx(6.25));
    CHECK(interpolate_trace(trace, 10.0, 0.0, -1.0) == 0.0);
    CHECK(interpolate_trace(trace, 10.0, 0.0, 2.0) == 0.0);
}

} // TEST_SUITE
