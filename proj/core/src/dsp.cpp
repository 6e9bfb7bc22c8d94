#include "zcjitter/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fft.hpp"
#include "zcjitter/error.hpp"
#include "zcjitter/units.hpp"

namespace zcjitter {

AnalysisConfig AnalysisConfig::for_span(double seconds, double sample_rate) {
    require(seconds > 0.0 && sample_rate > 0.0, ErrorCategory::configuration,
            "analysis span and sample rate must be positive");
    AnalysisConfig config;
    config.block = static_cast<std::size_t>(std::llround(seconds * sample_rate / 4.0));
    return config;
}

void validate(const AnalysisConfig& config) {
    require(config.block > 0, ErrorCategory::configuration, "analysis block length must be positive");
    const bool pow2 = config.oversample >= 2 && (config.oversample & (config.oversample - 1)) == 0;
    require(pow2, ErrorCategory::configuration,
            "oversampling factor must be a power of two >= 2, got " + std::to_string(config.oversample));
    require(config.bandwidth > 0.0, ErrorCategory::configuration, "bandwidth must be positive");
    require(config.carrier_nominal >= 0.0, ErrorCategory::configuration, "carrier must not be negative");
}

FrequencyBand analysis_band(double carrier, double bandwidth) {
    require(carrier > bandwidth, ErrorCategory::configuration,
            "bandwidth must be smaller than the carrier so that DC stays excluded");
    return {carrier - bandwidth, carrier + bandwidth};
}

namespace {

double edge_taper(double phase) noexcept {
    // phase in [-pi, 0]: 0 at the outer edge, 1 where the flat region starts.
    return 0.42 + 0.5 * std::cos(phase) + 0.08 * std::cos(2.0 * phase);
}

} // namespace

double blackman_edge_weight(double t, std::size_t block, double sample_rate) noexcept {
    const double taper_len = static_cast<double>(block) / sample_rate;
    const double span = 4.0 * taper_len;
    if (t < -taper_len || t > span + taper_len) {
        return 0.0;
    }
    if (t < 0.0) {
        return edge_taper(kPi * t / taper_len);
    }
    if (t <= span) {
        return 1.0;
    }
    return edge_taper(kPi * (span - t) / taper_len);
}

std::vector<double> blackman_edge_window(std::size_t block, double sample_rate) {
    require(block > 0 && sample_rate > 0.0, ErrorCategory::configuration,
            "edge window needs a positive block length and rate");
    const std::size_t n = 6 * block;
    const double nb = static_cast<double>(block);
    std::vector<double> w(n, 1.0);
    for (std::size_t i = 0; i < block; ++i) {
        w[i] = edge_taper(kPi * (static_cast<double>(i) - nb) / nb);
    }
    for (std::size_t i = 5 * block + 1; i < n; ++i) {
        w[i] = edge_taper(kPi * (5.0 * nb - static_cast<double>(i)) / nb);
    }
    return w;
}

std::vector<double> band_limit(std::span<const double> samples, double sample_rate, FrequencyBand band) {
    require(!samples.empty(), ErrorCategory::insufficient_signal, "band_limit: empty input");
    require(band.low >= 0.0 && band.high <= sample_rate / 2.0 && band.low <= band.high,
            ErrorCategory::configuration, "band_limit: band must lie inside [0, rate / 2]");
    const std::size_t n = samples.size();
    auto spectrum = detail::forward_real(samples);
    const double df = sample_rate / static_cast<double>(n);
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        if (!band.contains(static_cast<double>(k) * df)) {
            spectrum[k] = 0.0;
        }
    }
    return detail::inverse_real(std::move(spectrum), n);
}

std::vector<double> fft_interpolate(std::span<const double> samples, int oversample, FrequencyBand band,
                                    double sample_rate) {
    const bool pow2 = oversample >= 2 && (oversample & (oversample - 1)) == 0;
    require(pow2, ErrorCategory::configuration,
            "oversampling factor must be a power of two >= 2, got " + std::to_string(oversample));
    require(!samples.empty(), ErrorCategory::insufficient_signal, "fft_interpolate: empty input");
    require(band.low > 0.0 && band.high < sample_rate / 2.0 && band.low < band.high,
            ErrorCategory::configuration, "fft_interpolate: band must exclude DC and Nyquist");

    const std::size_t n = samples.size();
    const std::size_t n_out = n * static_cast<std::size_t>(oversample);
    const auto spectrum = detail::forward_real(samples);
    const double df = sample_rate / static_cast<double>(n);
    // Gain `oversample` in the padded spectrum, then the 1 / n_out inverse
    // normalisation: together a factor 1 / n on the kept bins.
    const double gain = static_cast<double>(oversample) / static_cast<double>(n_out);

    return detail::inverse_real_in_place(n_out, [&](std::span<std::complex<double>> bins) {
        for (std::size_t k = 1; k < spectrum.size(); ++k) {
            if (band.contains(static_cast<double>(k) * df)) {
                bins[k] = spectrum[k] * gain;
            }
        }
    });
}

std::vector<std::complex<double>> analytic_signal(std::span<const double> samples) {
    const std::size_t n = samples.size();
    require(n >= 2, ErrorCategory::insufficient_signal, "analytic_signal: need at least two samples");
    const auto half = detail::forward_real(samples);
    std::vector<std::complex<double>> full(n, {0.0, 0.0});
    full[0] = half[0];
    const std::size_t positive_end = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
    for (std::size_t k = 1; k < positive_end; ++k) {
        full[k] = 2.0 * half[k];
    }
    if (n % 2 == 0) {
        full[n / 2] = half[n / 2];
    }
    return detail::inverse_complex(full);
}

std::vector<double> blackman_window(std::size_t length) {
    // Periodic form (denominator n), the usual choice for spectral estimation.
    std::vector<double> w(length);
    const double n = static_cast<double>(length);
    for (std::size_t i = 0; i < length; ++i) {
        const double x = kTwoPi * static_cast<double>(i) / n;
        w[i] = 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x);
    }
    return w;
}

double Spectrum::dbfs(std::size_t bin) const {
    return 10.0 * std::log10(std::max(density.at(bin), std::numeric_limits<double>::min()));
}

double Spectrum::integrate(FrequencyBand band) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < density.size(); ++k) {
        if (band.contains(frequency[k])) {
            sum += density[k];
        }
    }
    return sum * resolution;
}

double Spectrum::total_power() const {
    double sum = 0.0;
    for (double d : density) {
        sum += d;
    }
    return sum * resolution;
}

Spectrum psd(std::span<const double> samples, double sample_rate, PsdWindow window) {
    const std::size_t n = samples.size();
    require(n >= 2, ErrorCategory::insufficient_signal, "psd: need at least two samples");
    require(sample_rate > 0.0, ErrorCategory::configuration, "psd: sample rate must be positive");

    std::vector<double> weighted(samples.begin(), samples.end());
    double power_sum = static_cast<double>(n);
    if (window == PsdWindow::blackman) {
        const auto w = blackman_window(n);
        power_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            weighted[i] *= w[i];
            power_sum += w[i] * w[i];
        }
    }
    const auto spectrum = detail::forward_real(weighted);

    Spectrum out;
    out.resolution = sample_rate / static_cast<double>(n);
    out.frequency.resize(spectrum.size());
    out.density.resize(spectrum.size());
    const double norm = 1.0 / (sample_rate * power_sum);
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        const bool unpaired = (k == 0) || (n % 2 == 0 && k == n / 2);
        out.frequency[k] = static_cast<double>(k) * out.resolution;
        out.density[k] = std::norm(spectrum[k]) * norm * (unpaired ? 1.0 : 2.0);
    }
    return out;
}

double estimate_carrier(std::span<const double> samples, double sample_rate) {
    const auto spectrum = psd(samples, sample_rate, PsdWindow::blackman);
    require(spectrum.size() >= 4, ErrorCategory::insufficient_signal, "estimate_carrier: record too short");
    std::size_t peak = 1;
    for (std::size_t k = 2; k + 1 < spectrum.size(); ++k) {
        if (spectrum.density[k] > spectrum.density[peak]) {
            peak = k;
        }
    }
    require(spectrum.density[peak] > 0.0, ErrorCategory::insufficient_signal,
            "estimate_carrier: no spectral line found");
    const double a = std::log(std::max(spectrum.density[peak - 1], 1e-300));
    const double b = std::log(spectrum.density[peak]);
    const double c = std::log(std::max(spectrum.density[peak + 1], 1e-300));
    const double denom = a - 2.0 * b + c;
    const double offset = (denom != 0.0) ? 0.5 * (a - c) / denom : 0.0;
    return (static_cast<double>(peak) + std::clamp(offset, -0.5, 0.5)) * spectrum.resolution;
}

} // namespace zcjitter
