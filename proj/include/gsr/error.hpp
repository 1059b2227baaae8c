#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gsr {

enum class ErrorCode {
    InvalidOrder,
    QuantityExceedsReserve,
    NoSolution,
    NotOnLevelSet,
    InvalidPermutation,
    TooLarge,
    UnknownAgent,
    Violation,
    NotLiquidityPreserving,
    UserOrderInfeasible,
    NTooSmall,
    CaseTwoReached,
    ProbeViolation,
    ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every library failure is reported through this type; callers switch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gsr
