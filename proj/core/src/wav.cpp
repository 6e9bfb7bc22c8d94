#include "zcjitter/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "zcjitter/error.hpp"

namespace zcjitter {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

[[noreturn]] void parse_error(std::size_t offset, const std::string& what) {
    fail(ErrorCategory::parse, "WAV byte offset " + std::to_string(offset) + ": " + what);
}

std::uint32_t u32(std::span<const std::uint8_t> b, std::size_t at) {
    return std::uint32_t{b[at]} | std::uint32_t{b[at + 1]} << 8 | std::uint32_t{b[at + 2]} << 16 |
           std::uint32_t{b[at + 3]} << 24;
}

std::uint16_t u16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
    return std::memcmp(b.data() + at, tag, 4) == 0;
}

std::string tag_text(std::span<const std::uint8_t> b, std::size_t at) {
    std::string s;
    for (std::size_t i = 0; i < 4; ++i) {
        const char c = static_cast<char>(b[at + i]);
        s += (c >= 32 && c < 127) ? c : '?';
    }
    return s;
}

void put16(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    put16(out, v & 0xFFFF);
    put16(out, v >> 16);
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

struct Format {
    std::uint16_t channels = 0;
    std::uint32_t rate = 0;
    std::uint16_t block_align = 0;
    std::uint16_t bits = 0;
};

Format parse_fmt(std::span<const std::uint8_t> b, std::size_t at, std::uint32_t size) {
    if (size < 16) {
        parse_error(at, "fmt chunk too small: expected at least 16 bytes, found " + std::to_string(size));
    }
    Format f;
    std::uint16_t tag = u16(b, at);
    f.channels = u16(b, at + 2);
    f.rate = u32(b, at + 4);
    f.block_align = u16(b, at + 12);
    f.bits = u16(b, at + 14);
    if (tag == kFormatExtensible) {
        if (size < 40) {
            parse_error(at, "extensible fmt chunk too small: expected 40 bytes, found " + std::to_string(size));
        }
        tag = u16(b, at + 24); // first two bytes of the sub-format GUID
    }
    if (tag != kFormatPcm) {
        parse_error(at, "unsupported format tag " + std::to_string(tag) + " (only integer PCM)");
    }
    if (f.bits != 16 && f.bits != 24) {
        parse_error(at + 14, "unsupported bit depth " + std::to_string(f.bits) + " (16 or 24)");
    }
    if (f.channels == 0) {
        parse_error(at + 2, "zero channels");
    }
    if (f.rate == 0) {
        parse_error(at + 4, "zero sample rate");
    }
    const auto expected_align = static_cast<std::uint32_t>(f.channels) * f.bits / 8;
    if (f.block_align != expected_align) {
        parse_error(at + 12, "block align is " + std::to_string(f.block_align) + ", expected " +
                                 std::to_string(expected_align));
    }
    return f;
}

} // namespace

SampleBuffer WavFile::channel(std::size_t index, double start_time) const {
    require(index < frames.size(), ErrorCategory::configuration,
            "channel " + std::to_string(index) + " not present (" + std::to_string(frames.size()) + " channels)");
    SampleBuffer b;
    b.samples = frames[index];
    b.bit_depth = bit_depth;
    b.sample_rate = sample_rate;
    b.start_time = start_time;
    return b;
}

WavFile WavFile::from_buffers(std::span<const SampleBuffer> channels) {
    require(!channels.empty(), ErrorCategory::configuration, "WAV needs at least one channel");
    WavFile w;
    w.channels = static_cast<int>(channels.size());
    w.sample_rate = static_cast<std::uint32_t>(std::llround(channels.front().sample_rate));
    w.bit_depth = channels.front().bit_depth;
    for (const auto& c : channels) {
        require(c.size() == channels.front().size() && c.bit_depth == w.bit_depth &&
                    c.sample_rate == channels.front().sample_rate,
                ErrorCategory::configuration, "WAV channels must share length, rate and bit depth");
        w.frames.push_back(c.samples);
    }
    return w;
}

WavFile parse_wav(std::span<const std::uint8_t> b) {
    if (b.size() < 12) {
        parse_error(0, "file too short for a RIFF header: expected 12 bytes, found " + std::to_string(b.size()));
    }
    if (!tag_is(b, 0, "RIFF")) {
        parse_error(0, "missing RIFF tag (found '" + tag_text(b, 0) + "')");
    }
    if (!tag_is(b, 8, "WAVE")) {
        parse_error(8, "missing WAVE tag (found '" + tag_text(b, 8) + "')");
    }
    // Trust the physical size when the RIFF size field overstates it; the data
    // chunk check below reports real truncation.
    const std::size_t end = std::min<std::size_t>(b.size(), std::size_t{u32(b, 4)} + 8);

    bool have_fmt = false;
    Format fmt;
    std::size_t at = 12;
    while (at + 8 <= end) {
        const std::uint32_t size = u32(b, at + 4);
        const std::size_t body = at + 8;
        if (tag_is(b, at, "fmt ")) {
            if (body + size > end) {
                parse_error(body, "truncated fmt chunk: expected " + std::to_string(size) + " bytes, found " +
                                      std::to_string(end - body));
            }
            fmt = parse_fmt(b, body, size);
            have_fmt = true;
        } else if (tag_is(b, at, "data")) {
            if (!have_fmt) {
                parse_error(at, "data chunk before fmt chunk");
            }
            if (body + size > b.size()) {
                parse_error(body, "truncated data chunk: expected " + std::to_string(size) + " bytes, found " +
                                      std::to_string(b.size() - body));
            }
            if (size % fmt.block_align != 0) {
                parse_error(at + 4, "data size " + std::to_string(size) + " is not a multiple of block align " +
                                        std::to_string(fmt.block_align));
            }
            WavFile w;
            w.channels = fmt.channels;
            w.sample_rate = fmt.rate;
            w.bit_depth = fmt.bits;
            const std::size_t frames = size / fmt.block_align;
            const std::size_t width = fmt.bits / 8;
            w.frames.assign(fmt.channels, std::vector<std::int32_t>(frames));
            const std::uint8_t* p = b.data() + body;
            for (std::size_t i = 0; i < frames; ++i) {
                for (std::size_t c = 0; c < fmt.channels; ++c, p += width) {
                    std::int32_t v;
                    if (width == 2) {
                        v = static_cast<std::int16_t>(p[0] | p[1] << 8);
                    } else {
                        const std::uint32_t raw = std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 |
                                                  std::uint32_t{p[2]} << 16;
                        v = static_cast<std::int32_t>(raw << 8) >> 8;
                    }
                    w.frames[c][i] = v;
                }
            }
            return w;
        }
        at = body + size + (size & 1U);
    }
    if (!have_fmt) {
        parse_error(at, "no fmt chunk found");
    }
    parse_error(at, "no data chunk found");
}

std::vector<std::uint8_t> encode_wav(const WavFile& wav) {
    require(wav.bit_depth == 16 || wav.bit_depth == 24, ErrorCategory::configuration,
            "WAV output supports 16 or 24 bits");
    require(wav.channels > 0 && wav.frames.size() == static_cast<std::size_t>(wav.channels),
            ErrorCategory::configuration, "WAV channel count does not match the frame arrays");
    const std::size_t frames = wav.frame_count();
    for (const auto& ch : wav.frames) {
        require(ch.size() == frames, ErrorCategory::configuration, "WAV channels differ in length");
    }
    const std::size_t width = static_cast<std::size_t>(wav.bit_depth) / 8;
    const std::size_t align = width * static_cast<std::size_t>(wav.channels);
    const std::size_t data_size = frames * align;
    require(data_size + 36 <= 0xFFFFFFFFULL, ErrorCategory::configuration, "WAV payload exceeds 4 GiB");
    const std::int64_t hi = (std::int64_t{1} << (wav.bit_depth - 1)) - 1;
    const std::int64_t lo = -hi - 1;

    std::vector<std::uint8_t> out;
    out.reserve(44 + data_size + (data_size & 1U));
    put_tag(out, "RIFF");
    put32(out, static_cast<std::uint32_t>(36 + data_size + (data_size & 1U)));
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put32(out, 16);
    put16(out, kFormatPcm);
    put16(out, static_cast<std::uint32_t>(wav.channels));
    put32(out, wav.sample_rate);
    put32(out, static_cast<std::uint32_t>(wav.sample_rate * align));
    put16(out, static_cast<std::uint32_t>(align));
    put16(out, static_cast<std::uint32_t>(wav.bit_depth));
    put_tag(out, "data");
    put32(out, static_cast<std::uint32_t>(data_size));
    for (std::size_t i = 0; i < frames; ++i) {
        for (const auto& ch : wav.frames) {
            const std::int32_t v = ch[i];
            if (v < lo || v > hi) {
                fail(ErrorCategory::configuration, "sample " + std::to_string(v) + " exceeds the declared bit depth");
            }
            const auto u = static_cast<std::uint32_t>(v);
            for (std::size_t byte = 0; byte < width; ++byte) {
                out.push_back(static_cast<std::uint8_t>(u >> (8 * byte)));
            }
        }
    }
    if (data_size & 1U) {
        out.push_back(0);
    }
    return out;
}

WavFile read_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCategory::io, "cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return parse_wav(bytes);
    } catch (const Error& e) {
        fail(e.category(), path.string() + ": " + e.what());
    }
}

void write_wav(const std::filesystem::path& path, const WavFile& wav) {
    const auto bytes = encode_wav(wav);
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCategory::io, "cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    require(static_cast<bool>(out), ErrorCategory::io, "write failed for " + path.string());
}

} // namespace zcjitter
