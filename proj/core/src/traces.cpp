#include <algorithm>
#include <cmath>
#include <string>

#include "zcjitter/error.hpp"
#include "zcjitter/sample_buffer.hpp"

namespace zcjitter {

std::vector<double> SampleBuffer::to_full_scale() const { return to_full_scale(0, samples.size()); }

std::vector<double> SampleBuffer::to_full_scale(std::size_t first, std::size_t count) const {
    require(first + count <= samples.size(), ErrorCategory::coverage,
            "requested sample range exceeds the buffer");
    const double scale = 1.0 / static_cast<double>(max_code());
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = static_cast<double>(samples[first + i]) * scale;
    }
    return out;
}

void validate(const SampleBuffer& buffer) {
    require(buffer.sample_rate > 0.0, ErrorCategory::configuration, "sample rate must be positive");
    require(buffer.bit_depth >= 2 && buffer.bit_depth <= 32, ErrorCategory::configuration,
            "bit depth must lie in [2, 32]");
    const auto lo = buffer.min_code();
    const auto hi = buffer.max_code();
    for (std::size_t i = 0; i < buffer.samples.size(); ++i) {
        const auto v = buffer.samples[i];
        if (v < lo || v > hi) {
            fail(ErrorCategory::configuration, "sample " + std::to_string(i) + " = " + std::to_string(v) +
                                                   " outside the " + std::to_string(buffer.bit_depth) +
                                                   "-bit range");
        }
    }
}

SampleBuffer average_channels(const SampleBuffer& left, const SampleBuffer& right) {
    require(left.size() == right.size() && left.sample_rate == right.sample_rate &&
                left.bit_depth == right.bit_depth,
            ErrorCategory::configuration, "channels to average must share length, rate and depth");
    SampleBuffer out = left;
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        const std::int64_t sum = std::int64_t{left.samples[i]} + std::int64_t{right.samples[i]};
        // floor division by two for negative sums as well
        out.samples[i] = static_cast<std::int32_t>(sum >= 0 ? sum / 2 : -((-sum + 1) / 2));
    }
    return out;
}

NoiseTraces NoiseTraces::zeros(std::size_t length, double sample_rate, double start_time) {
    NoiseTraces t;
    t.j.assign(length, 0.0);
    t.a_m.assign(length, 0.0);
    t.n_pi.assign(length, 0.0);
    t.a_total.assign(length, 0.0);
    t.sample_rate = sample_rate;
    t.start_time = start_time;
    return t;
}

void validate(const NoiseTraces& traces) {
    // An empty array stands for an all-zero trace.
    const auto n = std::max({traces.j.size(), traces.a_m.size(), traces.n_pi.size(), traces.a_total.size()});
    for (const auto* arr : {&traces.j, &traces.a_m, &traces.n_pi, &traces.a_total}) {
        require(arr->empty() || arr->size() == n, ErrorCategory::configuration,
                "noise traces must share one length");
    }
    require(traces.sample_rate > 0.0, ErrorCategory::configuration, "trace sample rate must be positive");
}

double interpolate_trace(std::span<const double> trace, double sample_rate, double start_time,
                         double t) noexcept {
    const std::size_t n = trace.size();
    if (n == 0) {
        return 0.0;
    }
    const double u = (t - start_time) * sample_rate;
    if (u < 0.0 || u > static_cast<double>(n - 1)) {
        return 0.0;
    }
    const auto i = static_cast<std::ptrdiff_t>(std::floor(u));
    const double f = u - static_cast<double>(i);
    const auto at = [&](std::ptrdiff_t k) {
        k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(n) - 1);
        return trace[static_cast<std::size_t>(k)];
    };
    const double wm1 = -f * (f - 1.0) * (f - 2.0) / 6.0;
    const double w0 = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
    const double w1 = -(f + 1.0) * f * (f - 2.0) / 2.0;
    const double w2 = (f + 1.0) * f * (f - 1.0) / 6.0;
    return wm1 * at(i - 1) + w0 * at(i) + w1 * at(i + 1) + w2 * at(i + 2);
}

} // namespace zcjitter
