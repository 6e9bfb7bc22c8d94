#pragma once

#include <cstddef>
#include <vector>

#include "zcjitter/dsp.hpp"
#include "zcjitter/sample_buffer.hpp"

namespace zcjitter {

/// Band-power accounting of a Blackman-windowed periodogram, in FS^2.
///
/// The spectrum is split into three disjoint parts that add up to the total:
/// the carrier peak (+/- carrier_bins around the maximum), the rest of the noise
/// band, and everything outside the band (the floor).
///
/// Close to the carrier the window leakage dominates the noise, so the reported
/// noise_band_power integrates only beyond `guard` Hz from the peak and scales the
/// result to the full band width assuming a flat density.
struct BandPowerReport {
    FrequencyBand band;
    double carrier_frequency = 0.0;
    double carrier_power = 0.0;
    double noise_band_power = 0.0;
    /// Band bins minus carrier bins, unguarded; part of the exact partition.
    double band_residual_power = 0.0;
    double floor_power = 0.0;
    double total_power = 0.0;
    double guard = 0.0;
    double noise_to_carrier_db = 0.0;
    double floor_to_carrier_db = 0.0;
};

inline constexpr int kCarrierBins = 2;
inline constexpr double kDefaultCarrierGuard = 200.0;

BandPowerReport fda_band_power(const SampleBuffer& buffer, FrequencyBand band,
                               double guard = kDefaultCarrierGuard);
BandPowerReport fda_band_power(const Spectrum& spectrum, FrequencyBand band, double guard = kDefaultCarrierGuard);

/// Jitter estimate from the instantaneous phase of the analytic signal, one
/// value per original sample of the flat span.
struct HtaTrace {
    std::vector<double> time;
    std::vector<double> jitter;
    double carrier = 0.0;
    double amplitude = 0.0;
    /// Phase of the fitted carrier at time[0].
    double phase0 = 0.0;
    /// Samples whose envelope fell below 10% of the mean; unwrapping is unreliable there.
    std::size_t weak_samples = 0;
};

/// Same window and band limitation as the zero-crossing pipeline; the linear
/// carrier phase is removed by least squares and the residual divided by omega.
HtaTrace hta_extract(const SampleBuffer& buffer, const AnalysisConfig& config, std::size_t span_start);

} // namespace zcjitter
