#include "periodfn/error.hpp"

namespace periodfn {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::NonMonotoneEnergy: return "NonMonotoneEnergy";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::AmbiguousBracket: return "AmbiguousBracket";
    case ErrorKind::SignViolation: return "SignViolation";
    case ErrorKind::DegenerateIsochronous: return "DegenerateIsochronous";
    case ErrorKind::RangeExceeded: return "RangeExceeded";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::EventMissed: return "EventMissed";
    case ErrorKind::ToleranceUnmet: return "ToleranceUnmet";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

} // namespace periodfn
