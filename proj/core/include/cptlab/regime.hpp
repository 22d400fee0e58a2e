#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "cptlab/preferences.hpp"

namespace cptlab {

enum class Verdict { WellPosed, IllPosed, Boundary };

enum class Cause {
  AlphaGeBeta,
  BetaDeltaBelowOne,
  AlphaGammaAboveOne,
  SufficientHolds,
  AlphaEqGamma,
  BetaEqDelta,
};

std::string_view to_string(Verdict verdict) noexcept;
std::string_view to_string(Cause cause) noexcept;

struct RegimeVerdict {
  Verdict verdict = Verdict::WellPosed;
  Cause cause = Cause::SufficientHolds;
  bool tk_caveat = false;

  friend bool operator==(const RegimeVerdict&, const RegimeVerdict&) = default;
};

/// Ordered checks: alpha >= beta, beta < delta, alpha > gamma, then the strict
/// sufficient condition, else Boundary. Ratios are compared by
/// cross-multiplication so no rounding enters.
RegimeVerdict classify(const CptSpec& spec);

/// Exact rational exponent num / den with 0 < num <= den.
struct Ratio {
  std::int64_t num = 1;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

RegimeVerdict classify(Ratio alpha, Ratio beta, Ratio gamma, Ratio delta);

struct GridPoint {
  Ratio alpha, beta, gamma, delta;
  RegimeVerdict verdict;
};

/// All points of {1/m, 2/m, ..., 1}^4 with their exact verdicts.
std::vector<GridPoint> classify_grid(std::int64_t m);

}  // namespace cptlab
