#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace zcjitter {

/// Closed frequency interval [low, high] in Hz.
struct FrequencyBand {
    double low = 0.0;
    double high = 0.0;

    double width() const noexcept { return high - low; }
    bool contains(double f) const noexcept { return f >= low && f <= high; }
};

/// Parameters of one zero-crossing analysis window.
///
/// A window spans 6 * block samples: a Blackman taper of `block` samples, a flat
/// region of 4 * block samples (the analysed span 0 <= t <= T) and a mirrored
/// taper. The defaults give T = 1 s at 192 kHz.
struct AnalysisConfig {
    std::size_t block = 48000;
    int oversample = 64;
    double bandwidth = 6000.0;
    /// Nominal carrier in Hz; 0 means "estimate from the spectrum peak".
    double carrier_nominal = 0.0;

    double span_seconds(double sample_rate) const noexcept {
        return 4.0 * static_cast<double>(block) / sample_rate;
    }
    std::size_t window_length() const noexcept { return 6 * block; }

    /// Config whose flat span lasts `seconds` at `sample_rate` (block rounded).
    static AnalysisConfig for_span(double seconds, double sample_rate);
};

/// Throws a configuration error unless oversample is a power of two >= 2,
/// block > 0 and bandwidth > 0.
void validate(const AnalysisConfig& config);

/// Pass band used before interpolation: carrier +/- bandwidth, never touching DC.
FrequencyBand analysis_band(double carrier, double bandwidth);

/// Edge window value at time t, measured from the start of the flat span.
/// Zero outside [-block/f_R, T + block/f_R].
double blackman_edge_weight(double t, std::size_t block, double sample_rate) noexcept;

/// Edge window sampled on the 6 * block grid; element i sits at t = (i - block) / f_R.
std::vector<double> blackman_edge_window(std::size_t block, double sample_rate);

/// Keeps only the FFT bins whose frequency lies inside `band`.
std::vector<double> band_limit(std::span<const double> samples, double sample_rate,
                               FrequencyBand band);

/// Frequency-domain interpolation by `oversample`.
///
/// Bins outside `band` are zeroed; the kept half-spectrum is scaled by
/// `oversample` and placed into a zero-padded spectrum of length
/// oversample * n, whose normalised inverse transform gives the output.
/// Output sample m * oversample equals the band-limited input sample m.
std::vector<double> fft_interpolate(std::span<const double> samples, int oversample,
                                    FrequencyBand band, double sample_rate);

/// Analytic signal: real part is the input, imaginary part its Hilbert transform.
std::vector<std::complex<double>> analytic_signal(std::span<const double> samples);

enum class PsdWindow { rectangular, blackman };

/// One-sided density spectrum in FS^2/Hz.
struct Spectrum {
    double resolution = 0.0;
    std::vector<double> frequency;
    std::vector<double> density;

    std::size_t size() const noexcept { return density.size(); }
    double dbfs(std::size_t bin) const;
    /// Sum of density * resolution over bins inside `band`.
    double integrate(FrequencyBand band) const;
    double total_power() const;
};

/// Periodogram normalised by the window power sum(w^2), so that the integral of
/// the density equals the mean square of the gain-corrected signal.
Spectrum psd(std::span<const double> samples, double sample_rate, PsdWindow window);

/// Frequency of the strongest spectral line (Blackman window, parabolic peak
/// interpolation on log magnitude).
double estimate_carrier(std::span<const double> samples, double sample_rate);

std::vector<double> blackman_window(std::size_t length);

} // namespace zcjitter
