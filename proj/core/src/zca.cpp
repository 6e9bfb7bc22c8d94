#include "zcjitter/zca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "zcjitter/error.hpp"
#include "zcjitter/units.hpp"

namespace zcjitter {

Crossings find_zero_crossings(std::span<const double> fine, double fine_rate, double fine_start,
                              double span_begin, double span_end) {
    require(fine_rate > 0.0, ErrorCategory::configuration, "fine sample rate must be positive");
    require(span_end > span_begin, ErrorCategory::configuration, "crossing span must not be empty");
    Crossings out;
    const auto n = static_cast<std::ptrdiff_t>(fine.size());
    if (n < 2) {
        fail(ErrorCategory::insufficient_signal, "fewer than 2 zero crossings in the analysis span");
    }
    // One sample of margin on each side so crossings at the span edges are bracketed.
    const auto first = std::clamp<std::ptrdiff_t>(
        static_cast<std::ptrdiff_t>(std::floor((span_begin - fine_start) * fine_rate)) - 1, 0, n - 1);
    const auto last = std::clamp<std::ptrdiff_t>(
        static_cast<std::ptrdiff_t>(std::ceil((span_end - fine_start) * fine_rate)) + 1, 0, n - 1);

    int last_sign = 0;
    std::ptrdiff_t pending_zero = -1;
    bool have_first = false;
    for (std::ptrdiff_t m = first; m <= last; ++m) {
        const double v = fine[static_cast<std::size_t>(m)];
        if (v == 0.0) {
            if (pending_zero < 0) {
                pending_zero = m;
            }
            continue;
        }
        const int sign = v > 0.0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) {
            double position;
            if (pending_zero >= 0) {
                position = static_cast<double>(pending_zero);
            } else {
                const double prev = fine[static_cast<std::size_t>(m - 1)];
                position = static_cast<double>(m - 1) + prev / (prev - v);
            }
            const double t = fine_start + position / fine_rate;
            if (t >= span_begin && t <= span_end) {
                if (!have_first) {
                    out.first = sign > 0 ? Parity::rising : Parity::falling;
                    have_first = true;
                }
                out.times.push_back(t);
            }
        }
        pending_zero = -1;
        last_sign = sign;
    }
    if (out.times.size() < 2) {
        fail(ErrorCategory::insufficient_signal,
             "fewer than 2 zero crossings in the analysis span (found " + std::to_string(out.times.size()) + ")");
    }
    return out;
}

GridFit fit_ideal_grid(std::span<const double> s) {
    const std::size_t m = s.size();
    require(m >= 2, ErrorCategory::insufficient_signal, "grid fit needs at least two crossings");

    // Centre both axes; times are taken relative to s[0] to keep precision.
    const double k_mean = static_cast<double>(m - 1) / 2.0; // 0-based index mean
    double r_mean = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        r_mean += s[k] - s[0];
    }
    r_mean /= static_cast<double>(m);
    double sxy = 0.0;
    double sxx = 0.0;
    bool monotonic = true;
    for (std::size_t k = 0; k < m; ++k) {
        const double dk = static_cast<double>(k) - k_mean;
        sxy += dk * ((s[k] - s[0]) - r_mean);
        sxx += dk * dk;
        if (k > 0 && !(s[k] > s[k - 1])) {
            monotonic = false;
        }
    }
    const double slope = sxy / sxx;
    GridFit fit;
    fit.carrier = 1.0 / (2.0 * slope);
    fit.s1_prime = s[0] + (r_mean - slope * k_mean);
    fit.monotonic = monotonic;
    return fit;
}

double ZeroCrossingSeries::omega_a0() const noexcept { return kTwoPi * carrier * amplitude; }

ZeroCrossingSeries make_series(std::vector<double> s, Parity first, double amplitude) {
    const GridFit fit = fit_ideal_grid(s);
    ZeroCrossingSeries out;
    out.carrier = fit.carrier;
    out.first_parity = first;
    out.amplitude = amplitude;
    out.monotonic = fit.monotonic;
    const double spacing = 1.0 / (2.0 * fit.carrier);
    out.s_prime.resize(s.size());
    out.delta.resize(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        out.s_prime[k] = fit.s1_prime + static_cast<double>(k) * spacing;
        out.delta[k] = out.s_prime[k] - s[k];
    }
    out.span_begin = s.front();
    out.span_end = s.back();
    out.s = std::move(s);
    return out;
}

namespace {

void check_window_coverage(std::span<const double> window, std::size_t block) {
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t b = 0; b < 6; ++b) {
        double ms = 0.0;
        for (std::size_t i = b * block; i < (b + 1) * block; ++i) {
            ms += window[i] * window[i];
        }
        const double rms = std::sqrt(ms / static_cast<double>(block));
        lo = (b == 0) ? rms : std::min(lo, rms);
        hi = std::max(hi, rms);
    }
    require(hi > 0.0, ErrorCategory::coverage, "analysis window contains no signal");
    require(lo >= 0.5 * hi, ErrorCategory::coverage,
            "analysis window reaches outside the main part (carrier amplitude drops below half)");
}

} // namespace

double resolve_carrier(const SampleBuffer& buffer, const AnalysisConfig& config) {
    if (config.carrier_nominal > 0.0) {
        return config.carrier_nominal;
    }
    return estimate_carrier(buffer.to_full_scale(), buffer.sample_rate);
}

ZeroCrossingSeries compute_zcf(const SampleBuffer& buffer, const AnalysisConfig& config, std::size_t span_start) {
    validate(config);
    require(buffer.sample_rate > 0.0, ErrorCategory::configuration, "sample rate must be positive");
    const std::size_t block = config.block;
    require(span_start >= block && span_start + 5 * block <= buffer.size(), ErrorCategory::coverage,
            "analysis window [" + std::to_string(span_start) + " - N, +5N) exceeds the buffer of " +
                std::to_string(buffer.size()) + " samples");

    const std::size_t first = span_start - block;
    auto window = buffer.to_full_scale(first, 6 * block);
    check_window_coverage(window, block);

    const double carrier =
        config.carrier_nominal > 0.0 ? config.carrier_nominal : estimate_carrier(window, buffer.sample_rate);
    const auto edge = blackman_edge_window(block, buffer.sample_rate);
    for (std::size_t i = 0; i < window.size(); ++i) {
        window[i] *= edge[i];
    }

    const FrequencyBand band = analysis_band(carrier, config.bandwidth);
    const auto fine = fft_interpolate(window, config.oversample, band, buffer.sample_rate);
    const double fine_rate = buffer.sample_rate * config.oversample;
    const double fine_start = buffer.time_of(first);
    const double span_begin = buffer.time_of(span_start);
    const double span_end = span_begin + config.span_seconds(buffer.sample_rate);

    auto crossings = find_zero_crossings(fine, fine_rate, fine_start, span_begin, span_end);

    const std::size_t flat_begin = block * static_cast<std::size_t>(config.oversample);
    const std::size_t flat_end = 5 * flat_begin;
    double ms = 0.0;
    for (std::size_t m = flat_begin; m < flat_end; ++m) {
        ms += fine[m] * fine[m];
    }
    const double amplitude = std::sqrt(2.0 * ms / static_cast<double>(flat_end - flat_begin));

    auto series = make_series(std::move(crossings.times), crossings.first, amplitude);
    series.span_begin = span_begin;
    series.span_end = span_end;
    return series;
}

std::pair<ZeroCrossingSeries, ZeroCrossingSeries> align_crossings(const ZeroCrossingSeries& a,
                                                                  const ZeroCrossingSeries& b, double a_onset,
                                                                  double b_onset) {
    require(a.size() >= 2 && b.size() >= 2, ErrorCategory::insufficient_signal,
            "alignment needs at least two crossings per series");
    // Crossing count since each recorder's onset, in that recorder's own clock.
    const auto count_a = [&](std::size_t k, bool fitted) {
        return ((fitted ? a.s_prime[k] : a.s[k]) - a_onset) * 2.0 * a.carrier;
    };
    const auto count_b = [&](std::size_t k, bool fitted) {
        return ((fitted ? b.s_prime[k] : b.s[k]) - b_onset) * 2.0 * b.carrier;
    };

    // Matching crossings share parity, so the index offset is even when the first
    // parities agree and odd otherwise; this doubles the tolerated onset error.
    const double offset = count_a(0, true) - count_b(0, true);
    const bool odd = a.first_parity != b.first_parity;
    const auto shift = static_cast<std::ptrdiff_t>(
        odd ? 2.0 * std::floor(offset / 2.0) + 1.0 : 2.0 * std::round(offset / 2.0));
    const double residual = offset - static_cast<double>(shift);
    if (std::abs(residual) > 0.75) {
        fail(ErrorCategory::synchronization,
             "crossing grids disagree by " + std::to_string(residual) +
                 " crossing intervals after onset alignment; onsets do not mark the same event");
    }

    // a[k] <-> b[k + shift]
    const auto a_size = static_cast<std::ptrdiff_t>(a.size());
    const auto b_size = static_cast<std::ptrdiff_t>(b.size());
    const std::ptrdiff_t k_begin = std::max<std::ptrdiff_t>(0, -shift);
    const std::ptrdiff_t k_end = std::min<std::ptrdiff_t>(a_size, b_size - shift);
    if (k_end - k_begin < 2) {
        fail(ErrorCategory::synchronization, "the two series share fewer than two crossings");
    }
    if (a.parity(static_cast<std::size_t>(k_begin)) != b.parity(static_cast<std::size_t>(k_begin + shift))) {
        fail(ErrorCategory::synchronization, "crossing parity differs after alignment (half-cycle slip)");
    }

    const double reference = count_a(static_cast<std::size_t>(k_begin), false) -
                             count_b(static_cast<std::size_t>(k_begin + shift), false);
    std::vector<double> sa;
    std::vector<double> sb;
    sa.reserve(static_cast<std::size_t>(k_end - k_begin));
    sb.reserve(static_cast<std::size_t>(k_end - k_begin));
    for (std::ptrdiff_t k = k_begin; k < k_end; ++k) {
        const auto ka = static_cast<std::size_t>(k);
        const auto kb = static_cast<std::size_t>(k + shift);
        const double drift = count_a(ka, false) - count_b(kb, false) - reference;
        if (std::abs(drift) > 0.25) {
            fail(ErrorCategory::synchronization,
                 "cycle count mismatch at crossing " + std::to_string(k) + " (" + std::to_string(drift) +
                     " intervals); samples were dropped or the pairing is wrong");
        }
        sa.push_back(a.s[ka]);
        sb.push_back(b.s[kb]);
    }

    auto out_a = make_series(std::move(sa), a.parity(static_cast<std::size_t>(k_begin)), a.amplitude);
    auto out_b = make_series(std::move(sb), b.parity(static_cast<std::size_t>(k_begin + shift)), b.amplitude);
    out_a.span_begin = a.span_begin;
    out_a.span_end = a.span_end;
    out_b.span_begin = b.span_begin;
    out_b.span_end = b.span_end;
    return {std::move(out_a), std::move(out_b)};
}

std::vector<double> running_rms(const SampleBuffer& buffer, std::size_t length) {
    require(length > 0, ErrorCategory::configuration, "running RMS length must be positive");
    require(buffer.size() >= length, ErrorCategory::insufficient_signal, "buffer shorter than the RMS window");
    // Exact integer sliding sum; 24-bit squares over a few thousand samples fit in 64 bits.
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < length; ++i) {
        sum += std::int64_t{buffer.samples[i]} * buffer.samples[i];
    }
    const double scale = 1.0 / static_cast<double>(buffer.max_code());
    const double inv_len = 1.0 / static_cast<double>(length);
    std::vector<double> out(buffer.size() - length + 1);
    for (std::size_t i = 0;; ++i) {
        out[i] = std::sqrt(static_cast<double>(sum) * inv_len) * scale;
        if (i + length >= buffer.size()) {
            break;
        }
        sum += std::int64_t{buffer.samples[i + length]} * buffer.samples[i + length];
        sum -= std::int64_t{buffer.samples[i]} * buffer.samples[i];
    }
    return out;
}

namespace {

std::size_t four_cycles(const SampleBuffer& buffer, double carrier) {
    require(carrier > 0.0, ErrorCategory::configuration, "carrier must be positive");
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(4.0 * buffer.sample_rate / carrier)));
}

} // namespace

namespace {

// Maximum-likelihood change point of the sample variance inside [begin, end):
// the split that best separates a quiet segment from a louder one.
std::size_t refine_onset(const SampleBuffer& buffer, std::size_t begin, std::size_t end, std::size_t min_segment) {
    const std::size_t n = end - begin;
    std::vector<std::int64_t> prefix(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t v = buffer.samples[begin + i];
        prefix[i + 1] = prefix[i] + v * v;
    }
    // Quantisation variance keeps the log finite on digital silence.
    constexpr double kFloor = 1.0 / 12.0;
    const auto total = static_cast<double>(prefix[n]);
    std::size_t best = begin + n / 2;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t tau = min_segment; tau + min_segment <= n; ++tau) {
        const auto head = static_cast<double>(prefix[tau]);
        const double n1 = static_cast<double>(tau);
        const double n2 = static_cast<double>(n - tau);
        const double v1 = head / n1 + kFloor;
        const double v2 = (total - head) / n2 + kFloor;
        if (v2 <= v1) {
            continue;
        }
        const double score = -n1 * std::log(v1) - n2 * std::log(v2);
        if (score > best_score) {
            best_score = score;
            best = begin + tau;
        }
    }
    return best;
}

} // namespace

double detect_onset(const SampleBuffer& buffer, double carrier, double fraction) {
    const std::size_t length = four_cycles(buffer, carrier);
    const auto rms = running_rms(buffer, length);
    const double peak = *std::max_element(rms.begin(), rms.end());
    require(peak > 0.0, ErrorCategory::insufficient_signal, "buffer is silent; no onset to detect");
    const double threshold = fraction * peak;
    const auto coarse =
        static_cast<std::size_t>(std::find_if(rms.begin(), rms.end(), [&](double v) { return v >= threshold; }) -
                                 rms.begin());
    // The level change lies inside the first RMS window that crossed the threshold.
    const std::size_t begin = coarse > 8 * length ? coarse - 8 * length : 0;
    const std::size_t end = std::min(buffer.size(), coarse + 9 * length);
    if (end - begin < 4 * length) {
        return buffer.time_of(coarse);
    }
    return buffer.time_of(refine_onset(buffer, begin, end, length / 4 + 1));
}

MainPart find_main_part(const SampleBuffer& buffer, double carrier) {
    const std::size_t length = four_cycles(buffer, carrier);
    const auto rms = running_rms(buffer, length);
    const double peak = *std::max_element(rms.begin(), rms.end());
    require(peak > 0.0, ErrorCategory::insufficient_signal, "buffer is silent; no main part");
    constexpr double kPlateau = 0.95;
    const double threshold = kPlateau * peak;
    MainPart part;
    part.first = static_cast<std::size_t>(
        std::find_if(rms.begin(), rms.end(), [&](double v) { return v >= threshold; }) - rms.begin());
    const auto last = std::find_if(rms.rbegin(), rms.rend(), [&](double v) { return v >= threshold; });
    part.last = static_cast<std::size_t>(rms.rend() - last - 1) + length - 1;
    return part;
}

std::vector<std::size_t> plan_windows(const SampleBuffer& buffer, const AnalysisConfig& config, double carrier,
                                      std::size_t count) {
    validate(config);
    require(count > 0, ErrorCategory::configuration, "window count must be positive");
    const MainPart part = find_main_part(buffer, carrier);
    const std::size_t block = config.block;
    const std::size_t first_start = part.first + block;
    const std::size_t last_start = first_start + (count - 1) * 4 * block;
    if (last_start + 5 * block > part.last + 1) {
        fail(ErrorCategory::coverage, std::to_string(count) + " windows of " +
                                          std::to_string(config.span_seconds(buffer.sample_rate)) +
                                          " s do not fit inside the main part (" +
                                          std::to_string(part.last + 1 - part.first) + " samples)");
    }
    std::vector<std::size_t> starts(count);
    for (std::size_t w = 0; w < count; ++w) {
        starts[w] = first_start + w * 4 * block;
    }
    return starts;
}

} // namespace zcjitter
