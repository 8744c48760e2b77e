#include "dynamo/error.hpp"

namespace dynamo {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotAnInvolution: return "NotAnInvolution";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::NotOnCone: return "NotOnCone";
    case ErrorKind::ApexPoint: return "ApexPoint";
    case ErrorKind::ProfileVanishes: return "ProfileVanishes";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::NotDefective: return "NotDefective";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::LostBracket: return "LostBracket";
  }
  return "Unknown";
}

}  // namespace dynamo
