#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace zcjitter {

/// Integer PCM samples of one channel. Sample i sits at
/// start_time + i / sample_rate (0-based).
struct SampleBuffer {
    std::vector<std::int32_t> samples;
    int bit_depth = 24;
    double sample_rate = 192000.0;
    double start_time = 0.0;

    std::size_t size() const noexcept { return samples.size(); }
    bool empty() const noexcept { return samples.empty(); }

    /// Largest positive code, 2^(bit_depth-1) - 1. Full scale maps to this value.
    std::int64_t max_code() const noexcept { return (std::int64_t{1} << (bit_depth - 1)) - 1; }
    std::int64_t min_code() const noexcept { return -(std::int64_t{1} << (bit_depth - 1)); }

    double time_of(std::size_t index) const noexcept {
        return start_time + static_cast<double>(index) / sample_rate;
    }

    /// Samples scaled so that max_code() maps to 1.0 FS.
    std::vector<double> to_full_scale() const;
    std::vector<double> to_full_scale(std::size_t first, std::size_t count) const;
};

/// Throws a configuration error if any sample lies outside the declared bit depth
/// or the rate is not positive.
void validate(const SampleBuffer& buffer);

/// Averages two channels sample-wise (floor of the mean), as done for a stereo
/// recorder whose inputs are tied together.
SampleBuffer average_channels(const SampleBuffer& left, const SampleBuffer& right);

/// Ground-truth noise traces on a uniform grid starting at start_time.
///
/// Amplitude traces are in full-scale units of the recorder input (A_R = 1 FS).
/// For a player, `j` is the playback timing jitter in seconds. For a recorder,
/// `j` is the ADC sampling-instant jitter and `a_total` the additive input noise.
struct NoiseTraces {
    std::vector<double> j;
    std::vector<double> a_m;
    std::vector<double> n_pi;
    std::vector<double> a_total;
    double sample_rate = 192000.0;
    double start_time = 0.0;

    static NoiseTraces zeros(std::size_t length, double sample_rate, double start_time = 0.0);

    std::size_t size() const noexcept {
        return std::max({j.size(), a_m.size(), n_pi.size(), a_total.size()});
    }
    double end_time() const noexcept {
        return start_time + static_cast<double>(size() - 1) / sample_rate;
    }
};

/// Throws a configuration error unless every non-empty array has the same length.
/// An empty array means the corresponding noise is absent.
void validate(const NoiseTraces& traces);

/// Evaluates a uniformly sampled trace at an arbitrary time with 4-point cubic
/// Lagrange interpolation. Outside the grid the trace is taken as zero.
double interpolate_trace(std::span<const double> trace, double sample_rate, double start_time,
                         double t) noexcept;

} // namespace zcjitter
