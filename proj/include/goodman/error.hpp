#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace goodman {

enum class ErrorKind {
    InvalidArgument,
    PreconditionViolation,
    InternalError,
    UnsupportedShape,
    UnsupportedDimension,
    WrongTheorem,
    ParseError,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::PreconditionViolation: return "precondition-violation";
    case ErrorKind::InternalError: return "internal-error";
    case ErrorKind::UnsupportedShape: return "unsupported-shape";
    case ErrorKind::UnsupportedDimension: return "unsupported-dimension";
    case ErrorKind::WrongTheorem: return "wrong-theorem";
    case ErrorKind::ParseError: return "parse-error";
    }
    return "unknown";
}

/// Every library failure is reported through this type; `kind()` carries the
/// category and `witness()` an optional human-readable certificate (a gap, a
/// point of excess depth, an offending field path).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::optional<std::string> witness = std::nullopt)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message),
          kind_(kind),
          witness_(std::move(witness)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::optional<std::string>& witness() const noexcept { return witness_; }

private:
    ErrorKind kind_;
    std::optional<std::string> witness_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message,
                              std::optional<std::string> witness = std::nullopt) {
    throw Error(kind, message, std::move(witness));
}

} // namespace goodman
