#include "zcjitter/synthesis.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "zcjitter/error.hpp"
#include "zcjitter/rng.hpp"
#include "zcjitter/units.hpp"

namespace zcjitter {

void validate(const PlaybackSpec& spec) {
    require(spec.sample_rate > 0.0, ErrorCategory::configuration, "playback rate must be positive");
    require(spec.bit_depth >= 2 && spec.bit_depth <= 32, ErrorCategory::configuration,
            "playback bit depth must lie in [2, 32]");
    require(spec.i_main > 0 && spec.fade_length > 0 && spec.main_length > 0, ErrorCategory::configuration,
            "playback part lengths must be positive");
    require(spec.fade_length < spec.i_main, ErrorCategory::configuration,
            "fade length must be shorter than the main-part index");
    require(spec.v_min >= 0 && spec.v_min < spec.v_max(), ErrorCategory::configuration,
            "v_min must lie in [0, v_max)");
}

namespace {

// 1-based index u inside the fade-out maps to the fade-in sample it mirrors.
double mirror_fade_out(const PlaybackSpec& spec, double u) noexcept {
    return static_cast<double>(2 * spec.i_main + spec.main_length - 1) - u;
}

double fade_in_envelope(const PlaybackSpec& spec, double u) noexcept {
    const double vmin = static_cast<double>(spec.v_min);
    const double vmax = static_cast<double>(spec.v_max());
    const double x = (u - static_cast<double>(spec.i_main)) / static_cast<double>(spec.fade_length);
    return vmin + (1.0 + std::cos(kPi * x)) * (vmax - vmin) / 2.0;
}

enum class Region { silence, fade_in, main, fade_out };

Region region_of(const PlaybackSpec& spec, double u) noexcept {
    const double fade_start = static_cast<double>(spec.i_main - spec.fade_length);
    const double main_start = static_cast<double>(spec.i_main);
    const double main_end = static_cast<double>(spec.i_main + spec.main_length); // exclusive
    const double fade_out_end = main_end + static_cast<double>(spec.fade_length);
    if (u < fade_start || u >= fade_out_end) {
        return Region::silence;
    }
    if (u < main_start) {
        return Region::fade_in;
    }
    if (u < main_end) {
        return Region::main;
    }
    return Region::fade_out;
}

} // namespace

double playback_envelope(const PlaybackSpec& spec, double index) noexcept {
    switch (region_of(spec, index)) {
    case Region::silence: return 0.0;
    case Region::fade_in: return fade_in_envelope(spec, index);
    case Region::main: return static_cast<double>(spec.v_max());
    case Region::fade_out: return fade_in_envelope(spec, mirror_fade_out(spec, index));
    }
    return 0.0;
}

SampleBuffer generate_playback_waveform(const PlaybackSpec& spec) {
    validate(spec);
    SampleBuffer out;
    out.bit_depth = spec.bit_depth;
    out.sample_rate = spec.sample_rate;
    out.start_time = 0.0;
    out.samples.assign(spec.total_length(), 0);

    // cos(2 pi mod(i - i_main, 4) / 4) takes the exact values 1, 0, -1, 0.
    constexpr int kPattern[4] = {1, 0, -1, 0};
    const auto pattern = [&](std::int64_t i) {
        const auto m = ((i - static_cast<std::int64_t>(spec.i_main)) % 4 + 4) % 4;
        return kPattern[m];
    };
    for (std::size_t k = 0; k < out.samples.size(); ++k) {
        const auto i = static_cast<std::int64_t>(k) + 1;
        const double u = static_cast<double>(i);
        const Region r = region_of(spec, u);
        if (r == Region::silence) {
            continue;
        }
        // The fade-out is the reversed fade-in sequence, carrier pattern included.
        const std::int64_t source = (r == Region::fade_out)
                                        ? static_cast<std::int64_t>(mirror_fade_out(spec, u))
                                        : i;
        const double envelope = playback_envelope(spec, static_cast<double>(source));
        out.samples[k] = static_cast<std::int32_t>(std::llround(envelope) * pattern(source));
    }
    return out;
}

double band_fraction(FrequencyBand band, double sample_rate) noexcept {
    return band.width() / (sample_rate / 2.0);
}

std::vector<double> make_bandlimited_noise(std::size_t length, double sample_rate, double full_band_rms,
                                           FrequencyBand band, std::uint64_t seed, std::uint32_t stream) {
    require(length > 0, ErrorCategory::configuration, "noise length must be positive");
    require(sample_rate > 0.0, ErrorCategory::configuration, "noise rate must be positive");
    require(band.low >= 0.0 && band.high <= sample_rate / 2.0 && band.low <= band.high,
            ErrorCategory::configuration, "noise band must lie inside [0, rate / 2]");
    GaussianSource source(seed, stream);
    auto white = source.draw(length);
    for (double& v : white) {
        v *= full_band_rms;
    }
    return band_limit(white, sample_rate, band);
}

void validate(const DummySpec& spec) {
    require(spec.amplitude_ratio > 0.0 && spec.amplitude_ratio <= 1.0, ErrorCategory::configuration,
            "amplitude ratio must lie in (0, 1]");
    require(spec.sample_rate > 0.0, ErrorCategory::configuration, "sample rate must be positive");
    require(spec.carrier > 0.0 && spec.carrier < spec.sample_rate / 2.0, ErrorCategory::configuration,
            "carrier must lie below Nyquist");
    require(spec.bandwidth > 0.0 && spec.bandwidth < spec.carrier, ErrorCategory::configuration,
            "noise bandwidth must be positive and below the carrier");
    require(spec.carrier + spec.bandwidth <= spec.sample_rate / 2.0, ErrorCategory::configuration,
            "carrier + bandwidth exceeds Nyquist");
    require(spec.bit_depth >= 2 && spec.bit_depth <= 32, ErrorCategory::configuration,
            "bit depth must lie in [2, 32]");
    require(spec.length > 0, ErrorCategory::configuration, "dummy length must be positive");
    require(spec.jitter_full_band >= 0.0 && spec.recorder_noise_equiv >= 0.0, ErrorCategory::configuration,
            "noise levels must not be negative");
}

namespace {

enum Stream : std::uint32_t { kStreamJitter = 1, kStreamAm = 2, kStreamPi = 3, kStreamAdditive = 4 };

} // namespace

NoiseTraces make_dummy_traces(const DummySpec& spec) {
    validate(spec);
    const std::size_t n = spec.length;
    const double omega_a0 = kTwoPi * spec.carrier * spec.amplitude_ratio;
    const FrequencyBand low{0.0, spec.bandwidth};
    const FrequencyBand pass{spec.carrier - spec.bandwidth, spec.carrier + spec.bandwidth};

    NoiseTraces t = NoiseTraces::zeros(n, spec.sample_rate, 0.0);
    if (spec.enable_jitter) {
        t.j = make_bandlimited_noise(n, spec.sample_rate, spec.jitter_full_band, low, spec.seed, kStreamJitter);
    }
    if (spec.enable_am) {
        t.a_m = make_bandlimited_noise(n, spec.sample_rate, omega_a0 * spec.jitter_full_band, low, spec.seed,
                                       kStreamAm);
    }
    if (spec.enable_pi) {
        t.n_pi = make_bandlimited_noise(n, spec.sample_rate, omega_a0 * spec.jitter_full_band, pass, spec.seed,
                                        kStreamPi);
    }
    if (spec.recorder_noise_equiv > 0.0) {
        const double full = omega_a0 * spec.recorder_noise_equiv / std::sqrt(band_fraction(pass, spec.sample_rate));
        t.a_total = make_bandlimited_noise(n, spec.sample_rate, full, pass, spec.seed, kStreamAdditive);
    }
    return t;
}

namespace {

std::int32_t quantize(double full_scale_value, std::int64_t max_code, std::int64_t min_code,
                      std::size_t& clipped) {
    const double code = std::floor(static_cast<double>(max_code) * full_scale_value);
    if (code > static_cast<double>(max_code)) {
        ++clipped;
        return static_cast<std::int32_t>(max_code);
    }
    if (code < static_cast<double>(min_code)) {
        ++clipped;
        return static_cast<std::int32_t>(min_code);
    }
    return static_cast<std::int32_t>(code);
}

double at_or_zero(const std::vector<double>& v, std::size_t i) noexcept { return i < v.size() ? v[i] : 0.0; }

} // namespace

SynthesisResult synthesize_dummy_waveform(const DummySpec& spec, const NoiseTraces& traces) {
    validate(spec);
    validate(traces);
    require(traces.size() >= spec.length, ErrorCategory::configuration,
            "noise traces shorter than the requested dummy length");
    require(traces.sample_rate == spec.sample_rate, ErrorCategory::configuration,
            "noise traces must be sampled at the dummy rate");

    SynthesisResult result;
    SampleBuffer& out = result.buffer;
    out.bit_depth = spec.bit_depth;
    out.sample_rate = spec.sample_rate;
    out.start_time = 0.0;
    out.samples.resize(spec.length);

    const double omega = kTwoPi * spec.carrier;
    const double a0 = spec.amplitude_ratio;
    const auto max_code = out.max_code();
    const auto min_code = out.min_code();
    for (std::size_t i = 0; i < spec.length; ++i) {
        const double t = static_cast<double>(i) / spec.sample_rate;
        const double phase = omega * t + spec.theta0;
        const double c = std::cos(phase);
        const double s = std::sin(phase);
        const double value = a0 * c - a0 * omega * at_or_zero(traces.j, i) * s + at_or_zero(traces.a_m, i) * c +
                             at_or_zero(traces.n_pi, i) + at_or_zero(traces.a_total, i);
        out.samples[i] = quantize(value, max_code, min_code, result.clipped);
    }
    return result;
}

NoiseTraces make_noise_traces(const NoiseRecipe& r) {
    require(r.length > 0 && r.sample_rate > 0.0, ErrorCategory::configuration,
            "noise recipe needs a positive length and rate");
    require(r.bandwidth > 0.0 && r.bandwidth < r.carrier && r.carrier + r.bandwidth <= r.sample_rate / 2.0,
            ErrorCategory::configuration, "noise recipe band must fit between DC and Nyquist");
    const double omega_a0 = kTwoPi * r.carrier * r.amplitude;
    const FrequencyBand low{0.0, r.bandwidth};
    const FrequencyBand pass{r.carrier - r.bandwidth, r.carrier + r.bandwidth};
    const double low_gain = 1.0 / std::sqrt(band_fraction(low, r.sample_rate));
    const double pass_gain = 1.0 / std::sqrt(band_fraction(pass, r.sample_rate));

    NoiseTraces t;
    t.sample_rate = r.sample_rate;
    t.start_time = r.start_time;
    if (r.jitter_rms > 0.0) {
        t.j = make_bandlimited_noise(r.length, r.sample_rate, r.jitter_rms * low_gain, low, r.seed, kStreamJitter);
    }
    if (r.am_equiv > 0.0) {
        t.a_m = make_bandlimited_noise(r.length, r.sample_rate, omega_a0 * r.am_equiv * low_gain, low, r.seed,
                                       kStreamAm);
    }
    if (r.pi_equiv > 0.0) {
        t.n_pi = make_bandlimited_noise(r.length, r.sample_rate, omega_a0 * r.pi_equiv * pass_gain, pass, r.seed,
                                        kStreamPi);
    }
    if (r.additive_equiv > 0.0) {
        t.a_total = make_bandlimited_noise(r.length, r.sample_rate, omega_a0 * r.additive_equiv * pass_gain, pass,
                                           r.seed, kStreamAdditive);
    }
    return t;
}

double PlayerSignal::main_start_time() const noexcept {
    return start_time + static_cast<double>(playback.i_main - 1) / playback.sample_rate;
}

double PlayerSignal::main_end_time() const noexcept {
    return start_time + static_cast<double>(playback.i_main + playback.main_length - 2) / playback.sample_rate;
}

double PlayerSignal::fade_in_start_time() const noexcept {
    return start_time + static_cast<double>(playback.i_main - playback.fade_length - 1) / playback.sample_rate;
}

double PlayerSignal::value(double t) const noexcept {
    const double u = (t - start_time) * playback.sample_rate + 1.0;
    const Region r = region_of(playback, u);
    double envelope = 0.0;
    double phase_index = u;
    double direction = 1.0;
    if (r != Region::silence) {
        envelope = playback_envelope(playback, u) / static_cast<double>(playback.v_max());
        if (r == Region::fade_out) {
            phase_index = mirror_fade_out(playback, u);
            direction = -1.0;
        }
    }
    const double n_pi = interpolate_trace(noise.n_pi, noise.sample_rate, noise.start_time, t);
    if (envelope == 0.0) {
        return n_pi;
    }
    // Ideal reconstruction of v[i] = E cos(pi/2 (i - i_main)): a tone at f_P / 4.
    const double phase = 0.5 * kPi * (phase_index - static_cast<double>(playback.i_main));
    const double omega = direction * kTwoPi * carrier();
    const double j = interpolate_trace(noise.j, noise.sample_rate, noise.start_time, t);
    const double am = interpolate_trace(noise.a_m, noise.sample_rate, noise.start_time, t);
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    return envelope * ((level + am) * c - level * omega * j * s) + n_pi;
}

SynthesisResult simulate_recording(const PlayerSignal& player, const NoiseTraces& recorder_noise,
                                   const RecorderSetup& setup) {
    validate(player.playback);
    validate(player.noise);
    validate(recorder_noise);
    require(setup.sample_rate > 0.0 && setup.length > 0, ErrorCategory::configuration,
            "recorder rate and length must be positive");
    require(setup.bit_depth >= 2 && setup.bit_depth <= 32, ErrorCategory::configuration,
            "recorder bit depth must lie in [2, 32]");
    const double record_end = setup.start_time + static_cast<double>(setup.length - 1) / setup.sample_rate;
    require(setup.start_time <= player.main_start_time() && record_end >= player.main_end_time(),
            ErrorCategory::coverage, "recording window does not cover the playback main part");

    SynthesisResult result;
    SampleBuffer& out = result.buffer;
    out.bit_depth = setup.bit_depth;
    out.sample_rate = setup.sample_rate;
    out.start_time = setup.start_time;
    out.samples.resize(setup.length);
    const auto max_code = out.max_code();
    const auto min_code = out.min_code();
    for (std::size_t i = 0; i < setup.length; ++i) {
        const double t = setup.start_time + static_cast<double>(i) / setup.sample_rate;
        const double jitter = interpolate_trace(recorder_noise.j, recorder_noise.sample_rate,
                                                recorder_noise.start_time, t);
        const double additive = interpolate_trace(recorder_noise.a_total, recorder_noise.sample_rate,
                                                  recorder_noise.start_time, t);
        out.samples[i] = quantize(player.value(t + jitter) + additive, max_code, min_code, result.clipped);
    }
    return result;
}

DrsRecordings simulate_drs(const DrsScenario& sc) {
    validate(sc.playback);
    DrsRecordings out;
    out.player.playback = sc.playback;
    out.player.level = sc.level;
    const double duration = static_cast<double>(sc.playback.total_length()) / sc.playback.sample_rate;
    const double carrier = sc.playback.tone_frequency();

    NoiseRecipe player;
    player.jitter_rms = sc.player_jitter;
    player.pi_equiv = sc.player_pi;
    player.carrier = carrier;
    player.amplitude = sc.level;
    player.sample_rate = sc.player_noise_rate;
    player.length = static_cast<std::size_t>(std::ceil(duration * sc.player_noise_rate)) + 16;
    player.seed = sc.seed;
    out.player.noise = make_noise_traces(player);
    if (sc.bundled && !out.player.noise.n_pi.empty()) {
        NoiseRecipe second = player;
        second.jitter_rms = 0.0;
        second.seed = sc.seed + 0x1000;
        const auto other = make_noise_traces(second);
        for (std::size_t i = 0; i < other.n_pi.size(); ++i) {
            out.player.noise.n_pi[i] = 0.5 * (out.player.noise.n_pi[i] + other.n_pi[i]);
        }
    }

    const auto record = [&](double start, std::uint64_t seed) {
        RecorderSetup setup;
        setup.start_time = start;
        setup.sample_rate = sc.recorder_rate;
        setup.length = static_cast<std::size_t>(std::ceil((duration - start + 0.1) * sc.recorder_rate));
        NoiseRecipe noise;
        noise.additive_equiv = sc.recorder_noise;
        noise.carrier = carrier;
        noise.amplitude = sc.level;
        noise.sample_rate = sc.recorder_rate;
        noise.start_time = start;
        noise.length = setup.length + 8;
        noise.seed = seed;
        return simulate_recording(out.player, make_noise_traces(noise), setup).buffer;
    };
    out.a = record(sc.start_a, sc.seed + 0x2000);
    out.b = record(sc.start_b, sc.seed + 0x3000);
    return out;
}

} // namespace zcjitter
