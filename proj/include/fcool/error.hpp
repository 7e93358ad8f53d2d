#pragma once

#include <stdexcept>
#include <string>

namespace fcool {

enum class ErrorCode {
  InvalidArgument,
  Domain,             // state left the region x1 > 0
  Infeasible,         // horizon below the minimum transfer time
  UnsupportedRegion,  // bounded synthesis would need c <= 0
  Convergence,
  Inconsistency,      // acos/acosh argument out of range beyond round-off
  Resolution,         // grid too coarse for the requested mode
  Boundary,           // wavepacket reached the grid edge
  MaximumPrinciple,   // trivial multiplier vector
  Parse,
  Internal,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace fcool
