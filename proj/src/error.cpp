#include "frailty/error.hpp"

namespace frailty {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
        case ErrorKind::DegenerateDistribution: return "DegenerateDistribution";
        case ErrorKind::NumericalOverflow: return "NumericalOverflow";
        case ErrorKind::Unsupported: return "Unsupported";
        case ErrorKind::RootSolverFailed: return "RootSolverFailed";
        case ErrorKind::DegenerateConditional: return "DegenerateConditional";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::TooFewAtRisk: return "TooFewAtRisk";
        case ErrorKind::EmptyWindow: return "EmptyWindow";
        case ErrorKind::DivisionNearZero: return "DivisionNearZero";
        case ErrorKind::TimeBeforeFinalSegment: return "TimeBeforeFinalSegment";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

}  // namespace frailty
