#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zcjitter {

enum class ErrorCategory {
    configuration,
    coverage,
    insufficient_signal,
    synchronization,
    statistics,
    parse,
    io,
};

constexpr std::string_view to_string(ErrorCategory c) noexcept {
    switch (c) {
    case ErrorCategory::configuration: return "configuration";
    case ErrorCategory::coverage: return "coverage";
    case ErrorCategory::insufficient_signal: return "insufficient-signal";
    case ErrorCategory::synchronization: return "synchronization";
    case ErrorCategory::statistics: return "statistics";
    case ErrorCategory::parse: return "parse";
    case ErrorCategory::io: return "io";
    }
    return "unknown";
}

/// Every failure raised by the library carries one of the categories above so
/// that the CLI can map it to a stable exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& message) {
    throw Error(category, message);
}

inline void require(bool condition, ErrorCategory category, const std::string& message) {
    if (!condition) {
        fail(category, message);
    }
}

} // namespace zcjitter
