#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "zcjitter/dsp.hpp"
#include "zcjitter/synthesis.hpp"

namespace zcjitter {

/// Plain-text `key = value` configuration. Blank lines and `#` comments are
/// ignored. Keys are dotted: `dummy.*`, `playback.*` and `analysis.*`.
///
///   dummy:    carrier_hz amplitude_ratio theta0 jitter_ps bandwidth_hz
///             sample_rate_hz bit_depth length seed jitter am pi recorder_noise_ps
///   playback: sample_rate_hz bit_depth i_main fade_length main_length v_min
///   analysis: block window_seconds oversample bandwidth_hz carrier_hz
///
/// `analysis.window_seconds` needs the recorder rate and is resolved by
/// apply(..., AnalysisConfig&, rate). Booleans accept true/false/1/0/yes/no.
struct ConfigEntry {
    std::string value;
    int line = 0;
};

using ConfigMap = std::map<std::string, ConfigEntry, std::less<>>;

ConfigMap parse_config(std::string_view text);
ConfigMap load_config(const std::filesystem::path& path);

/// Each apply overwrites the fields whose keys are present and validates the result.
void apply(const ConfigMap& config, DummySpec& spec);
void apply(const ConfigMap& config, PlaybackSpec& spec);
void apply(const ConfigMap& config, AnalysisConfig& analysis, double sample_rate);

/// Throws a configuration error naming the first key that no section knows.
void check_known_keys(const ConfigMap& config);

} // namespace zcjitter
