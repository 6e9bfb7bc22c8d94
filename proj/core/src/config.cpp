#include "zcjitter/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "zcjitter/error.hpp"
#include "zcjitter/units.hpp"

namespace zcjitter {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

[[noreturn]] void bad_value(std::string_view key, const ConfigEntry& e, std::string_view expected) {
    fail(ErrorCategory::configuration, "config line " + std::to_string(e.line) + ": " + std::string(key) +
                                           " = '" + e.value + "' is not " + std::string(expected));
}

template <typename T>
T parse_number(std::string_view key, const ConfigEntry& e) {
    T v{};
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        bad_value(key, e, "a number");
    }
    return v;
}

bool parse_bool(std::string_view key, const ConfigEntry& e) {
    std::string v = e.value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        return false;
    }
    bad_value(key, e, "a boolean");
}

using Setter = std::function<void(std::string_view, const ConfigEntry&)>;
using Table = std::vector<std::pair<std::string_view, Setter>>;

void run(const ConfigMap& config, std::string_view section, const Table& table) {
    for (const auto& [name, setter] : table) {
        const std::string key = std::string(section) + "." + std::string(name);
        if (const auto it = config.find(key); it != config.end()) {
            setter(key, it->second);
        }
    }
}

Table dummy_table(DummySpec& s) {
    return {
        {"carrier_hz", [&](auto k, auto& e) { s.carrier = parse_number<double>(k, e); }},
        {"amplitude_ratio", [&](auto k, auto& e) { s.amplitude_ratio = parse_number<double>(k, e); }},
        {"theta0", [&](auto k, auto& e) { s.theta0 = parse_number<double>(k, e); }},
        {"jitter_ps", [&](auto k, auto& e) { s.jitter_full_band = from_ps(parse_number<double>(k, e)); }},
        {"bandwidth_hz", [&](auto k, auto& e) { s.bandwidth = parse_number<double>(k, e); }},
        {"sample_rate_hz", [&](auto k, auto& e) { s.sample_rate = parse_number<double>(k, e); }},
        {"bit_depth", [&](auto k, auto& e) { s.bit_depth = parse_number<int>(k, e); }},
        {"length", [&](auto k, auto& e) { s.length = parse_number<std::size_t>(k, e); }},
        {"seed", [&](auto k, auto& e) { s.seed = parse_number<std::uint64_t>(k, e); }},
        {"jitter", [&](auto k, auto& e) { s.enable_jitter = parse_bool(k, e); }},
        {"am", [&](auto k, auto& e) { s.enable_am = parse_bool(k, e); }},
        {"pi", [&](auto k, auto& e) { s.enable_pi = parse_bool(k, e); }},
        {"recorder_noise_ps", [&](auto k, auto& e) { s.recorder_noise_equiv = from_ps(parse_number<double>(k, e)); }},
    };
}

Table playback_table(PlaybackSpec& s) {
    return {
        {"sample_rate_hz", [&](auto k, auto& e) { s.sample_rate = parse_number<double>(k, e); }},
        {"bit_depth", [&](auto k, auto& e) { s.bit_depth = parse_number<int>(k, e); }},
        {"i_main", [&](auto k, auto& e) { s.i_main = parse_number<std::size_t>(k, e); }},
        {"fade_length", [&](auto k, auto& e) { s.fade_length = parse_number<std::size_t>(k, e); }},
        {"main_length", [&](auto k, auto& e) { s.main_length = parse_number<std::size_t>(k, e); }},
        {"v_min", [&](auto k, auto& e) { s.v_min = parse_number<std::int64_t>(k, e); }},
    };
}

Table analysis_table(AnalysisConfig& a, double rate) {
    return {
        {"block", [&](auto k, auto& e) { a.block = parse_number<std::size_t>(k, e); }},
        {"window_seconds",
         [&, rate](auto k, auto& e) { a.block = AnalysisConfig::for_span(parse_number<double>(k, e), rate).block; }},
        {"oversample", [&](auto k, auto& e) { a.oversample = parse_number<int>(k, e); }},
        {"bandwidth_hz", [&](auto k, auto& e) { a.bandwidth = parse_number<double>(k, e); }},
        {"carrier_hz", [&](auto k, auto& e) { a.carrier_nominal = parse_number<double>(k, e); }},
    };
}

} // namespace

ConfigMap parse_config(std::string_view text) {
    ConfigMap out;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view s = raw;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) {
            s = s.substr(0, hash);
        }
        s = trim(s);
        if (s.empty()) {
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            fail(ErrorCategory::configuration, "config line " + std::to_string(line) + ": expected key = value");
        }
        const auto key = trim(s.substr(0, eq));
        const auto value = trim(s.substr(eq + 1));
        if (key.empty() || value.empty()) {
            fail(ErrorCategory::configuration, "config line " + std::to_string(line) + ": empty key or value");
        }
        if (const auto it = out.find(key); it != out.end()) {
            fail(ErrorCategory::configuration, "config line " + std::to_string(line) + ": duplicate key " +
                                                   std::string(key) + " (first on line " +
                                                   std::to_string(it->second.line) + ")");
        }
        out.emplace(std::string(key), ConfigEntry{std::string(value), line});
    }
    return out;
}

ConfigMap load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCategory::io, "cannot open config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

void apply(const ConfigMap& config, DummySpec& spec) {
    run(config, "dummy", dummy_table(spec));
    validate(spec);
}

void apply(const ConfigMap& config, PlaybackSpec& spec) {
    run(config, "playback", playback_table(spec));
    validate(spec);
}

void apply(const ConfigMap& config, AnalysisConfig& analysis, double sample_rate) {
    run(config, "analysis", analysis_table(analysis, sample_rate));
    validate(analysis);
}

void check_known_keys(const ConfigMap& config) {
    DummySpec d;
    PlaybackSpec p;
    AnalysisConfig a;
    const std::pair<std::string_view, Table> sections[] = {
        {"dummy", dummy_table(d)}, {"playback", playback_table(p)}, {"analysis", analysis_table(a, 1.0)}};
    for (const auto& [key, entry] : config) {
        bool known = false;
        for (const auto& [section, table] : sections) {
            for (const auto& [name, setter] : table) {
                known = known || key == std::string(section) + "." + std::string(name);
            }
        }
        if (!known) {
            fail(ErrorCategory::configuration,
                 "config line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
        }
    }
}

} // namespace zcjitter
