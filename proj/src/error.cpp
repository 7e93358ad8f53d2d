#include "fcool/error.hpp"

namespace fcool {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::UnsupportedRegion: return "unsupported region";
    case ErrorCode::Convergence: return "convergence failure";
    case ErrorCode::Inconsistency: return "inconsistency";
    case ErrorCode::Resolution: return "insufficient resolution";
    case ErrorCode::Boundary: return "boundary violation";
    case ErrorCode::MaximumPrinciple: return "maximum principle violation";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Internal: return "internal error";
  }
  return "unknown error";
}

}  // namespace fcool
