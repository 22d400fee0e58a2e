#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cptlab {

enum class ErrorCode {
  Domain,               // argument outside the mathematical domain
  InvalidParameter,     // construction-time validation failure
  NegativeSupport,      // law has mass below zero where a nonnegative law is required
  InconsistentTail,     // fitted tail disagrees with the tabulated body
  UndefinedFunctional,  // V_-(X^-) is not finite, so V(X) is undefined
  Infeasible,           // no solution exists for the requested target
  NonConvergence,       // iterative method hit its cap
  SingularMatrix,       // volatility cell is not invertible
  DegenerateMarket,     // total kernel variance is zero
  Precondition,         // operation called outside its parameter regime
  Regime,               // optimizer/diverge called with the wrong well-posedness verdict
  Parse,                // malformed input document
  Io,                   // file could not be read or written
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace cptlab
