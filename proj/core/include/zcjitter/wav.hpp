#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "zcjitter/sample_buffer.hpp"

namespace zcjitter {

/// Integer PCM audio, one sample vector per channel. 16- and 24-bit only.
struct WavFile {
    int channels = 1;
    std::uint32_t sample_rate = 192000;
    int bit_depth = 24;
    std::vector<std::vector<std::int32_t>> frames;

    std::size_t frame_count() const noexcept { return frames.empty() ? 0 : frames.front().size(); }
    SampleBuffer channel(std::size_t index, double start_time = 0.0) const;
    static WavFile from_buffers(std::span<const SampleBuffer> channels);
};

/// Parses a RIFF/WAVE image. Unknown chunks are skipped (with their pad byte);
/// WAVE_FORMAT_EXTENSIBLE is accepted when its sub-format is PCM. Errors name
/// the byte offset and, for size problems, the expected and actual counts.
WavFile parse_wav(std::span<const std::uint8_t> bytes);

/// Canonical 44-byte-header PCM image.
std::vector<std::uint8_t> encode_wav(const WavFile& wav);

WavFile read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const WavFile& wav);

} // namespace zcjitter
