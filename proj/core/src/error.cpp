#include "cptlab/error.hpp"

namespace cptlab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NegativeSupport: return "NegativeSupport";
    case ErrorCode::InconsistentTail: return "InconsistentTail";
    case ErrorCode::UndefinedFunctional: return "UndefinedFunctional";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::DegenerateMarket: return "DegenerateMarket";
    case ErrorCode::Precondition: return "PreconditionViolation";
    case ErrorCode::Regime: return "RegimeError";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Io: return "IoError";
  }
  return "Unknown";
}

}  // namespace cptlab
