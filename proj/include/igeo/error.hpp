#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace igeo {

enum class ErrorCode {
    RankDeficient,
    DimensionMismatch,
    NotUnit,
    InvalidArgument,
    DegenerateVector,
    IdenticallyZero,
    DegenerateLine,
    ParseError,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers can dispatch on the kind without parsing messages.
class GeometryError : public std::runtime_error {
public:
    GeometryError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateVector: return "DegenerateVector";
    case ErrorCode::IdenticallyZero: return "IdenticallyZero";
    case ErrorCode::DegenerateLine: return "DegenerateLine";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace igeo
