#include "zcjitter/baseline.hpp"

#include <algorithm>
#include <cmath>

#include "zcjitter/error.hpp"
#include "zcjitter/units.hpp"

namespace zcjitter {

BandPowerReport fda_band_power(const Spectrum& spectrum, FrequencyBand band, double guard) {
    require(spectrum.size() > 2 * kCarrierBins + 1, ErrorCategory::insufficient_signal, "spectrum too short");
    const double nyquist = spectrum.frequency.back();
    require(band.low >= 0.0 && band.high <= nyquist && band.high > band.low, ErrorCategory::configuration,
            "noise band must lie inside [0, Nyquist]");
    require(guard >= 0.0, ErrorCategory::configuration, "carrier guard must not be negative");

    const auto peak_it = std::max_element(spectrum.density.begin() + 1, spectrum.density.end());
    const auto peak = static_cast<std::size_t>(peak_it - spectrum.density.begin());
    const std::size_t c_lo = peak >= kCarrierBins ? peak - kCarrierBins : 0;
    const std::size_t c_hi = std::min(spectrum.size() - 1, peak + kCarrierBins);

    BandPowerReport r;
    r.band = band;
    r.guard = guard;
    r.carrier_frequency = spectrum.frequency[peak];
    double guarded = 0.0;
    double guarded_width = 0.0;
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        const double p = spectrum.density[k] * spectrum.resolution;
        r.total_power += p;
        const double f = spectrum.frequency[k];
        if (k >= c_lo && k <= c_hi) {
            r.carrier_power += p;
        } else if (band.contains(f)) {
            r.band_residual_power += p;
            if (std::abs(f - r.carrier_frequency) > guard) {
                guarded += p;
                guarded_width += spectrum.resolution;
            }
        } else {
            r.floor_power += p;
        }
    }
    r.noise_band_power = guarded_width > 0.0 ? guarded * band.width() / guarded_width : 0.0;
    if (r.carrier_power > 0.0) {
        r.noise_to_carrier_db = db10(r.noise_band_power / r.carrier_power);
        r.floor_to_carrier_db = db10(r.floor_power / r.carrier_power);
    }
    return r;
}

BandPowerReport fda_band_power(const SampleBuffer& buffer, FrequencyBand band, double guard) {
    require(band.high <= buffer.sample_rate / 2.0, ErrorCategory::configuration, "noise band exceeds Nyquist");
    const auto spectrum = psd(buffer.to_full_scale(), buffer.sample_rate, PsdWindow::blackman);
    return fda_band_power(spectrum, band, guard);
}

HtaTrace hta_extract(const SampleBuffer& buffer, const AnalysisConfig& config, std::size_t span_start) {
    validate(config);
    const std::size_t block = config.block;
    require(span_start >= block && span_start + 5 * block <= buffer.size(), ErrorCategory::coverage,
            "HTA window exceeds the buffer");
    auto window = buffer.to_full_scale(span_start - block, 6 * block);
    const double carrier =
        config.carrier_nominal > 0.0 ? config.carrier_nominal : estimate_carrier(window, buffer.sample_rate);
    const auto edge = blackman_edge_window(block, buffer.sample_rate);
    for (std::size_t i = 0; i < window.size(); ++i) {
        window[i] *= edge[i];
    }
    const auto limited = band_limit(window, buffer.sample_rate, analysis_band(carrier, config.bandwidth));
    const auto analytic = analytic_signal(limited);

    const std::size_t n = 4 * block;
    std::vector<double> phase(n);
    double envelope_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        envelope_mean += std::abs(analytic[block + i]);
    }
    envelope_mean /= static_cast<double>(n);

    HtaTrace out;
    double previous = 0.0;
    double unwrapped = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto z = analytic[block + i];
        if (std::abs(z) < 0.1 * envelope_mean) {
            ++out.weak_samples;
        }
        const double p = std::arg(z);
        if (i == 0) {
            unwrapped = p;
        } else {
            unwrapped += std::remainder(p - previous, kTwoPi);
        }
        previous = p;
        phase[i] = unwrapped;
    }

    // Least-squares line through the unwrapped phase against the sample index.
    const double i_mean = static_cast<double>(n - 1) / 2.0;
    double p_mean = 0.0;
    for (double p : phase) {
        p_mean += p;
    }
    p_mean /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double di = static_cast<double>(i) - i_mean;
        sxx += di * di;
        sxy += di * (phase[i] - p_mean);
    }
    const double slope = sxy / sxx;
    const double omega = slope * buffer.sample_rate;
    out.carrier = omega / kTwoPi;
    out.amplitude = envelope_mean;
    out.phase0 = p_mean - slope * i_mean;
    out.time.resize(n);
    out.jitter.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double fit = out.phase0 + slope * static_cast<double>(i);
        out.time[i] = buffer.time_of(span_start + i);
        out.jitter[i] = (phase[i] - fit) / omega;
    }
    return out;
}

} // namespace zcjitter
