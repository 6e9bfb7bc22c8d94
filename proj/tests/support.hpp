#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "zcjitter/baseline.hpp"
#include "zcjitter/sample_buffer.hpp"
#include "zcjitter/units.hpp"
#include "zcjitter/zca.hpp"

namespace zcjitter::testing {

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

inline double rms_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s / static_cast<double>(v.size()));
}

inline double correlation(const std::vector<double>& x, const std::vector<double>& y) {
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

/// Floor-quantised tone amplitude * cos(2 pi f t + phase), full scale = max code.
inline SampleBuffer tone_buffer(double frequency, double amplitude, std::size_t length, double rate = 192000.0,
                                double phase = 0.0, int bit_depth = 24) {
    SampleBuffer b;
    b.bit_depth = bit_depth;
    b.sample_rate = rate;
    b.samples.resize(length);
    const auto x_max = static_cast<double>(b.max_code());
    for (std::size_t i = 0; i < length; ++i) {
        const double t = static_cast<double>(i) / rate;
        b.samples[i] = static_cast<std::int32_t>(std::floor(x_max * amplitude * std::cos(kTwoPi * frequency * t + phase)));
    }
    return b;
}

/// Injected trace sampled at the ideal crossings s'_k.
inline std::vector<double> trace_at_crossings(const std::vector<double>& trace, const NoiseTraces& traces,
                                              const ZeroCrossingSeries& z) {
    std::vector<double> out(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        out[k] = interpolate_trace(trace, traces.sample_rate, traces.start_time, z.s_prime[k]);
    }
    return out;
}

/// ZCF converted to the PI amplitude it implies: sign(k) * delta_k * omega A_0.
inline std::vector<double> zcf_as_pi(const ZeroCrossingSeries& z) {
    std::vector<double> out(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        out[k] = z.sign(k) * z.delta[k] * z.omega_a0();
    }
    return out;
}

/// Correlation of the injected PI trace with what HTA implies for it. A phase
/// error phi at carrier phase theta corresponds to -A_0 omega j sin(theta).
inline double hta_pi_correlation(const HtaTrace& h, const NoiseTraces& traces) {
    std::vector<double> ref(h.time.size());
    std::vector<double> implied(h.time.size());
    const double w = kTwoPi * h.carrier;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        ref[i] = interpolate_trace(traces.n_pi, traces.sample_rate, traces.start_time, h.time[i]);
        implied[i] = -h.jitter[i] * w * h.amplitude * std::sin(w * (h.time[i] - h.time[0]) + h.phase0);
    }
    return correlation(ref, implied);
}

inline double hta_jitter_correlation(const HtaTrace& h, const NoiseTraces& traces) {
    std::vector<double> ref(h.time.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        ref[i] = interpolate_trace(traces.j, traces.sample_rate, traces.start_time, h.time[i]);
    }
    return correlation(ref, h.jitter);
}

} // namespace zcjitter::testing
