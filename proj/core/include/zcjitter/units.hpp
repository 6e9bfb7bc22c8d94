#pragma once

#include <cmath>
#include <numbers>

namespace zcjitter {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double kPicosecond = 1e-12;

constexpr double to_ps(double seconds) noexcept { return seconds / kPicosecond; }
constexpr double from_ps(double picoseconds) noexcept { return picoseconds * kPicosecond; }

/// Rounds a picosecond value to the 0.1 ps reporting resolution.
inline double round_report_ps(double picoseconds) noexcept {
    return std::round(picoseconds * 10.0) / 10.0;
}

inline double db10(double ratio) noexcept { return 10.0 * std::log10(ratio); }

} // namespace zcjitter
