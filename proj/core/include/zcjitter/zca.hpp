#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "zcjitter/dsp.hpp"
#include "zcjitter/sample_buffer.hpp"

namespace zcjitter {

enum class Parity { rising, falling };

constexpr Parity opposite(Parity p) noexcept { return p == Parity::rising ? Parity::falling : Parity::rising; }

/// Zero-crossing times in time order. Parity alternates starting from `first`.
struct Crossings {
    std::vector<double> times;
    Parity first = Parity::rising;
};

/// Crossings of the piecewise-linear curve through `fine`, whose sample m sits
/// at fine_start + m / fine_rate, restricted to span_begin <= t <= span_end.
///
/// Between two samples of opposite sign the crossing is the linear root. A
/// sample that is exactly zero is itself the crossing when the sign changes
/// across it; the sign of the next non-zero sample decides the parity.
Crossings find_zero_crossings(std::span<const double> fine, double fine_rate, double fine_start,
                              double span_begin, double span_end);

/// Ordinary least-squares line s'(k) = (k - 1) / (2 f'_C) + s'_1 through s_k, k = 1..M.
struct GridFit {
    double carrier = 0.0;
    double s1_prime = 0.0;
    /// False when s is not strictly increasing (a data-quality warning).
    bool monotonic = true;
};

GridFit fit_ideal_grid(std::span<const double> s);

/// Zero-crossing fluctuation series of one analysis window.
struct ZeroCrossingSeries {
    std::vector<double> s;
    std::vector<double> s_prime;
    /// delta[k] = s_prime[k] - s[k]
    std::vector<double> delta;
    double carrier = 0.0;
    Parity first_parity = Parity::rising;
    /// Carrier amplitude of the band-limited window in FS.
    double amplitude = 0.0;
    double span_begin = 0.0;
    double span_end = 0.0;
    bool monotonic = true;

    std::size_t size() const noexcept { return s.size(); }
    Parity parity(std::size_t k) const noexcept {
        return (k % 2 == 0) ? first_parity : opposite(first_parity);
    }
    /// (-1)^k of the crossing-grid convention: +1 on rising, -1 on falling
    /// crossings, so that sign(k) * omega A_0 * delta[k] tracks additive noise.
    double sign(std::size_t k) const noexcept { return parity(k) == Parity::rising ? 1.0 : -1.0; }
    double omega_a0() const noexcept;
};

/// Fits the ideal grid to measured crossings and fills s_prime / delta.
ZeroCrossingSeries make_series(std::vector<double> s, Parity first, double amplitude = 0.0);

/// Full pipeline on one window whose flat span starts at sample `span_start`:
/// edge window, band limit to carrier +/- bandwidth with DC removed, FFT
/// interpolation, crossings on [0, T], grid fit, ZCF.
ZeroCrossingSeries compute_zcf(const SampleBuffer& buffer, const AnalysisConfig& config, std::size_t span_start);

/// Carrier used for a buffer: the nominal one if configured, else the spectral peak.
double resolve_carrier(const SampleBuffer& buffer, const AnalysisConfig& config);

/// Re-indexes two series of the same playback so that index k names the same
/// physical crossing in both. Onsets are each recorder's detected start of the
/// playback, in that recorder's own time base. Both outputs are refitted on the
/// common crossings.
std::pair<ZeroCrossingSeries, ZeroCrossingSeries> align_crossings(const ZeroCrossingSeries& a,
                                                                  const ZeroCrossingSeries& b, double a_onset,
                                                                  double b_onset);

/// Running RMS over windows of `length` samples; element i covers [i, i + length).
std::vector<double> running_rms(const SampleBuffer& buffer, std::size_t length);

/// Time of the first sample where the 4-cycle running RMS reaches `fraction` of
/// its maximum over the buffer.
double detect_onset(const SampleBuffer& buffer, double carrier, double fraction);

/// Plateau of the carrier: sample range [first, last] whose 4-cycle running RMS
/// is at least 95% of its maximum, which excludes most of the fades.
struct MainPart {
    std::size_t first = 0;
    std::size_t last = 0;
};

MainPart find_main_part(const SampleBuffer& buffer, double carrier);

/// Start indices of `count` consecutive, non-overlapping analysis spans inside
/// the main part. Throws a coverage error if they do not fit.
std::vector<std::size_t> plan_windows(const SampleBuffer& buffer, const AnalysisConfig& config, double carrier,
                                      std::size_t count);

} // namespace zcjitter
