#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "zcjitter/dsp.hpp"
#include "zcjitter/sample_buffer.hpp"
#include "zcjitter/zca.hpp"

namespace zcjitter {

/// A standard deviation obtained from a variance equation. When the variance
/// comes out negative the result is kept but flagged, and `value` is zero.
struct Derived {
    double variance = 0.0;
    double value = 0.0;
    bool valid = true;

    static Derived from_variance(double variance) noexcept;
};

/// Mean-removed RMS (population) of a sequence.
double dev(std::span<const double> values);

/// Frequency ranges that the reported quantities refer to.
struct BandAnnotation {
    FrequencyBand jitter;
    FrequencyBand pi;
};

BandAnnotation make_bands(double carrier, double bandwidth, double span_seconds);

/// Double-recorder decomposition of one window. All times in seconds.
struct VarianceBudget {
    double e1 = 0.0;
    double e2 = 0.0;
    double e3 = 0.0;
    double e4 = 0.0;
    Derived sigma_n;
    Derived sigma_a;
    Derived sigma_b;
    /// E4^2 - (4 sigma_n^2 + sigma_a^2 + sigma_b^2), in s^2.
    double consistency_residual = 0.0;
    /// consistency_residual / E4^2, or 0 when E4 is 0.
    double consistency_relative = 0.0;
    std::size_t crossings = 0;
    /// omega A_0 of the two recordings (mean), for converting to amplitudes.
    double omega_a0 = 0.0;
    BandAnnotation bands;

    bool valid() const noexcept { return sigma_n.valid && sigma_a.valid && sigma_b.valid; }
};

/// Single-recorder statistic: sqrt(V{delta}), player and recorder combined.
double srs_budget(const ZeroCrossingSeries& series);

/// Solves the DRS equations from the four statistics (seconds).
VarianceBudget drs_from_stats(double e1, double e2, double e3, double e4);

/// Computes E1..E4 from two aligned series and decomposes them.
VarianceBudget drs_decompose(const ZeroCrossingSeries& a, const ZeroCrossingSeries& b);

/// Player jitter and PI noise from the single (sigma_n2) and bundled (sigma_n3)
/// output measurements; bundling the two outputs halves the PI variance.
struct PlayerSplit {
    double sigma_n2 = 0.0;
    double sigma_n3 = 0.0;
    Derived jitter;
    /// PI RMS divided by omega A_0.
    Derived pi_scaled;
};

PlayerSplit split_player_jitter_pi(double sigma_n2, double sigma_n3);

/// Recorder jitter and per-channel PI noise from the L/R channels of one
/// recorder, which share their sampling clock.
struct RecorderSplit {
    double e5 = 0.0;
    double e6 = 0.0;
    double e7 = 0.0;
    double e8 = 0.0;
    double sigma_n2 = 0.0;
    Derived pi_left;
    Derived pi_right;
    /// sigma_n2^2 + V{a_jitter} / (omega V_0)^2.
    Derived common;
    Derived jitter;
};

RecorderSplit split_recorder_from_stats(double e5, double e6, double e7, double e8, double sigma_n2);
RecorderSplit split_recorder_jitter_pi(const ZeroCrossingSeries& left, const ZeroCrossingSeries& right,
                                       double sigma_n2);

/// Phase dependence of the residual noise, V(theta) = A cos(2 theta) + B, in FS^2.
struct PhaseFit {
    double a = 0.0;
    double b = 0.0;
    std::vector<double> theta;
    std::vector<double> variance_by_phase;
    std::vector<std::size_t> count_by_phase;
    /// RMS of the per-bin fit residual.
    double residual_rms = 0.0;
    std::size_t cycles = 0;
    double carrier = 0.0;
    double amplitude = 0.0;
};

inline constexpr std::size_t kPhaseBins = 64;

/// Fits the carrier on the flat span starting at `span_start` (frequency from the
/// zero-crossing grid, amplitude and phase by least squares), folds the residual
/// by carrier phase into kPhaseBins bins and fits A cos(2 theta) + B to the
/// per-bin variances.
PhaseFit phase_variance_fit(const SampleBuffer& buffer, const AnalysisConfig& config, std::size_t span_start);

/// Same fit on an already band-limited, full-scale trace with known carrier.
PhaseFit phase_variance_fit(std::span<const double> samples, double sample_rate, double carrier);

/// Jitter whose carrier slope equals one LSB: 1 / (x_max ratio 2 pi f_C).
double detection_limit(int bit_depth, double amplitude_ratio, double carrier);

/// Mean and standard error of the mean over windows.
struct Summary {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t count = 0;
};

Summary summarize(std::span<const double> values);

} // namespace zcjitter
