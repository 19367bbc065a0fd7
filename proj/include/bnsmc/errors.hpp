#pragma once

#include <stdexcept>
#include <string>

namespace bnsmc {

enum class ErrorCode {
    BadArgument,
    Condition1Violated,           // variance-of-jumps condition on b^2/2
    Condition2Violated,           // positivity of the density process
    NegativeRate,                 // corrected jump intensity would be negative (alpha < 0)
    NonpositiveOneMinusTheta,     // log(1 - theta) undefined; outside the validated regime
    ArStall,                      // acceptance/rejection loop exceeded its proposal budget
    QuadratureFailure,            // adaptive integration did not converge
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::BadArgument: return "BAD_ARGUMENT";
        case ErrorCode::Condition1Violated: return "CONDITION1_VIOLATED";
        case ErrorCode::Condition2Violated: return "CONDITION2_VIOLATED";
        case ErrorCode::NegativeRate: return "NEGATIVE_RATE";
        case ErrorCode::NonpositiveOneMinusTheta: return "NONPOSITIVE_1_MINUS_THETA";
        case ErrorCode::ArStall: return "AR_STALL";
        case ErrorCode::QuadratureFailure: return "QUADRATURE_FAILURE";
        case ErrorCode::Internal: return "INTERNAL";
    }
    return "UNKNOWN";
}

}  // namespace bnsmc
