#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "zcjitter/dsp.hpp"
#include "zcjitter/sample_buffer.hpp"

namespace zcjitter {

/// Five-part playback file: silence, raised-cosine fade-in, main part
/// (v_max, 0, -v_max, 0 repeated, i.e. a tone at f_P / 4), reversed fade-out,
/// silence. Indices are 1-based as in the playback layout.
struct PlaybackSpec {
    double sample_rate = 48000.0;
    int bit_depth = 24;
    std::size_t i_main = 480000;
    std::size_t fade_length = 240000;
    std::size_t main_length = 1440000;
    std::int64_t v_min = 256;

    std::int64_t v_max() const noexcept { return (std::int64_t{1} << (bit_depth - 1)) - 1; }
    std::size_t total_length() const noexcept { return 2 * i_main + main_length; }
    double tone_frequency() const noexcept { return sample_rate / 4.0; }
};

void validate(const PlaybackSpec& spec);

/// Envelope of the playback waveform at a (possibly fractional) 1-based index.
double playback_envelope(const PlaybackSpec& spec, double index) noexcept;

SampleBuffer generate_playback_waveform(const PlaybackSpec& spec);

/// Normally distributed noise restricted to `band` by transform / mask / inverse
/// transform. `full_band_rms` is the RMS before masking, so a low-pass of width
/// B keeps rms * sqrt(B / (rate / 2)).
std::vector<double> make_bandlimited_noise(std::size_t length, double sample_rate,
                                           double full_band_rms, FrequencyBand band,
                                           std::uint64_t seed, std::uint32_t stream = 0);

/// Fraction of the full-band power that survives the mask `band` at `sample_rate`.
double band_fraction(FrequencyBand band, double sample_rate) noexcept;

/// Dummy recorded waveform built from a pure carrier plus selected noises.
struct DummySpec {
    double carrier = 11884.877;
    double amplitude_ratio = 0.9;
    double theta0 = 0.0;
    /// Full-bandwidth jitter RMS (s); AM and PI full-band RMS are omega A_0 J.
    double jitter_full_band = 160e-12;
    double bandwidth = 6000.0;
    double sample_rate = 192000.0;
    int bit_depth = 24;
    std::size_t length = 288000;
    std::uint64_t seed = 1;
    bool enable_jitter = true;
    bool enable_am = false;
    bool enable_pi = false;
    /// Additive recorder noise, band-pass around the carrier, as a time-equivalent
    /// RMS (divided by omega A_0). Zero disables it.
    double recorder_noise_equiv = 0.0;
};

void validate(const DummySpec& spec);

/// Ground-truth traces for a dummy: j = LF{J randn}, A_M = LF{omega A_0 J randn},
/// n_PI = BPF{omega A_0 J randn}, each from its own random stream.
NoiseTraces make_dummy_traces(const DummySpec& spec);

struct SynthesisResult {
    SampleBuffer buffer;
    std::size_t clipped = 0;
};

/// x[i] = floor(x_max (A_0 cos(wt + th) - A_0 w j sin(wt + th) + A_M cos(wt + th)
///                     + n_PI + a_total) / A_R) with A_R = 1 FS. Saturates on overflow.
SynthesisResult synthesize_dummy_waveform(const DummySpec& spec, const NoiseTraces& traces);

/// Band-limited noise recipe where every RMS is the value after band limiting.
/// Amplitude noises are specified as time equivalents (RMS / (omega A_0)).
struct NoiseRecipe {
    double jitter_rms = 0.0;
    double am_equiv = 0.0;
    double pi_equiv = 0.0;
    double additive_equiv = 0.0;
    double carrier = 12000.0;
    double amplitude = 0.9;
    double bandwidth = 6000.0;
    double sample_rate = 192000.0;
    double start_time = 0.0;
    std::size_t length = 0;
    std::uint64_t seed = 1;
};

/// Jitter and AM are low-passed to [0, bandwidth]; PI and additive noise are
/// band-passed to carrier +/- bandwidth.
NoiseTraces make_noise_traces(const NoiseRecipe& recipe);

/// Analog output of an ideal player: the playback tone reconstructed by an ideal
/// low-pass filter, scaled so that v_max maps to `level` FS at the recorder
/// input, plus the player's jitter, AM and PI noise.
struct PlayerSignal {
    PlaybackSpec playback;
    /// Time of playback sample 1.
    double start_time = 0.0;
    double level = 0.9;
    NoiseTraces noise;

    double carrier() const noexcept { return playback.tone_frequency(); }
    /// Time of the first main-part sample (phase zero of the carrier).
    double main_start_time() const noexcept;
    double main_end_time() const noexcept;
    double fade_in_start_time() const noexcept;
    /// Instantaneous output c(t) in FS units.
    double value(double t) const noexcept;
};

struct RecorderSetup {
    double start_time = 0.0;
    double sample_rate = 192000.0;
    int bit_depth = 24;
    std::size_t length = 0;
};

/// Samples c(t) + a_total(t) at t[i] = t_R + i / f_R + j_R(t[i]) and floors to
/// the recorder bit depth. The recorder low-pass at f_R / 2 is the identity here
/// because every modelled component is already band-limited below it.
SynthesisResult simulate_recording(const PlayerSignal& player, const NoiseTraces& recorder_noise,
                                   const RecorderSetup& setup);

/// One player feeding two recorders. The playback file is shortened (1 s
/// silence, 1 s fades, 12 s main part) to keep simulations fast. With
/// `bundled`, the player PI noise is the mean of two independent outputs,
/// which halves its variance.
struct DrsScenario {
    PlaybackSpec playback{48000.0, 24, 96000, 48000, 576000, 256};
    double level = 0.9;
    double player_jitter = 20e-12;
    double player_pi = 40e-12;
    double recorder_noise = 35e-12;
    bool bundled = false;
    double start_a = -0.1;
    double start_b = -0.2371234;
    double player_noise_rate = 384000.0;
    double recorder_rate = 192000.0;
    std::uint64_t seed = 1;
};

struct DrsRecordings {
    PlayerSignal player;
    SampleBuffer a;
    SampleBuffer b;
};

DrsRecordings simulate_drs(const DrsScenario& scenario);

} // namespace zcjitter
