#include "cptlab/regime.hpp"

#include "cptlab/error.hpp"

namespace cptlab {
namespace {

// Sign of x - y for positive exponents given as exact fractions.
template <typename T>
int compare(const T& x, const T& y);

template <>
int compare(const double& x, const double& y) {
  return x < y ? -1 : (x > y ? 1 : 0);
}

template <>
int compare(const Ratio& x, const Ratio& y) {
  const auto lhs = static_cast<std::int64_t>(x.num) * y.den;
  const auto rhs = static_cast<std::int64_t>(y.num) * x.den;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

template <typename T>
RegimeVerdict decide(const T& a, const T& b, const T& g, const T& d) {
  if (compare(a, b) >= 0) return {Verdict::IllPosed, Cause::AlphaGeBeta, false};
  if (compare(b, d) < 0) return {Verdict::IllPosed, Cause::BetaDeltaBelowOne, false};
  if (compare(a, g) > 0) return {Verdict::IllPosed, Cause::AlphaGammaAboveOne, false};
  if (compare(a, g) < 0 && compare(b, d) > 0)
    return {Verdict::WellPosed, Cause::SufficientHolds, false};
  return {Verdict::Boundary, compare(a, g) == 0 ? Cause::AlphaEqGamma : Cause::BetaEqDelta, false};
}

void check_ratio(const Ratio& r) {
  require(r.den > 0 && r.den <= 1000000000 && r.num > 0 && r.num <= r.den, ErrorCode::InvalidParameter,
          "rational exponents must lie in (0, 1]");
}

}  // namespace

std::string_view to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::WellPosed: return "WellPosed";
    case Verdict::IllPosed: return "IllPosed";
    case Verdict::Boundary: return "Boundary";
  }
  return "WellPosed";
}

std::string_view to_string(Cause cause) noexcept {
  switch (cause) {
    case Cause::AlphaGeBeta: return "AlphaGeBeta";
    case Cause::BetaDeltaBelowOne: return "BetaDeltaBelowOne";
    case Cause::AlphaGammaAboveOne: return "AlphaGammaAboveOne";
    case Cause::SufficientHolds: return "SufficientHolds";
    case Cause::AlphaEqGamma: return "AlphaEqGamma";
    case Cause::BetaEqDelta: return "BetaEqDelta";
  }
  return "SufficientHolds";
}

RegimeVerdict classify(const CptSpec& spec) {
  auto verdict = decide(spec.alpha(), spec.beta(), spec.gamma(), spec.delta());
  verdict.tk_caveat = spec.form() == Form::TverskyKahneman;
  return verdict;
}

RegimeVerdict classify(Ratio alpha, Ratio beta, Ratio gamma, Ratio delta) {
  for (const auto& r : {alpha, beta, gamma, delta}) check_ratio(r);
  return decide(alpha, beta, gamma, delta);
}

std::vector<GridPoint> classify_grid(std::int64_t m) {
  require(m >= 1 && m <= 400, ErrorCode::InvalidParameter, "grid denominator must be in [1, 400]");
  std::vector<GridPoint> out;
  out.reserve(static_cast<std::size_t>(m * m * m * m));
  for (std::int64_t a = 1; a <= m; ++a)
    for (std::int64_t b = 1; b <= m; ++b)
      for (std::int64_t g = 1; g <= m; ++g)
        for (std::int64_t d = 1; d <= m; ++d) {
          const Ratio ra{a, m}, rb{b, m}, rg{g, m}, rd{d, m};
          out.push_back({ra, rb, rg, rd, classify(ra, rb, rg, rd)});
        }
  return out;
}

}  // namespace cptlab
