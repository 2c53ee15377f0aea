#pragma once

#include <stdexcept>
#include <string>

namespace igp {

enum class ErrorCode {
    invalid_input,
    not_applicable,
    undefined_equilibrium,
    invalid_crossing,
    no_crossing,
    divergence,
    invalid_step,
    internal,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_input: return "invalid-input";
        case ErrorCode::not_applicable: return "not-applicable";
        case ErrorCode::undefined_equilibrium: return "undefined-equilibrium";
        case ErrorCode::invalid_crossing: return "invalid-crossing";
        case ErrorCode::no_crossing: return "no-crossing";
        case ErrorCode::divergence: return "divergence";
        case ErrorCode::invalid_step: return "invalid-step";
        case ErrorCode::internal: return "internal";
    }
    return "unknown";
}

/// Exception carrying a machine-readable error category.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace igp
