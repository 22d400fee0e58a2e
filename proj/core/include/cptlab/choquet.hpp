#pragma once

#include "cptlab/extended_value.hpp"
#include "cptlab/law.hpp"
#include "cptlab/preferences.hpp"

namespace cptlab {

struct EngineOptions {
  double abs_tol = 1e-11;  // body quadrature, absolute
  double rel_tol = 1e-11;  // body quadrature, relative
  double tail_tol = 1e-6;  // allowed relative body/tail mismatch at the junction
  // Tail exponents in (1, 1 + suspect_margin] are reported as DivergenceSuspected.
  double suspect_margin = 0.02;
};

enum class Side { Upper, Lower };

/// Integral of w(P{u(|X|) > y}) over y > 0 restricted to one side of zero:
/// Upper uses X > 0, Lower uses X < 0 with magnitude -X. Atom laws use the
/// exact telescoping sum, continuous laws tail-aware quadrature.
ExtendedValue side_choquet(const Law& law, const PreferenceSide& pref, Side side,
                           const EngineOptions& options = {});

/// Integral of P{X^u > y}^w dy for a nonnegative law (w = 1 gives E[X^u]).
ExtendedValue power_choquet(const Law& law, double utility_exponent, double distortion_exponent,
                            const EngineOptions& options = {});

/// V+(X) for a nonnegative law.
ExtendedValue choquet_plus(const Law& law, const CptSpec& spec, const EngineOptions& options = {});
/// V-(X) for a nonnegative law (X is the loss magnitude).
ExtendedValue choquet_minus(const Law& law, const CptSpec& spec, const EngineOptions& options = {});

struct CptParts {
  ExtendedValue gains;   // V+(X+)
  ExtendedValue losses;  // V-(X-)
};

/// Both halves of V for a signed law, after moving the reference point to 0.
CptParts cpt_parts(const Law& law, const CptSpec& spec, const EngineOptions& options = {});

/// V(X) = V+(X+) - V-(X-). Throws UndefinedFunctional when V-(X-) = +inf.
ExtendedValue cpt_value(const Law& law, const CptSpec& spec, const EngineOptions& options = {});

/// E[min(X, a)] for a nonnegative law under the given measure.
double truncated_mean(const Law& law, double a, Measure measure = Measure::P);

/// E[X] for a nonnegative law; +inf is certified from a tail exponent <= 1.
ExtendedValue expectation(const Law& law, Measure measure = Measure::P);

struct RootOptions {
  double abs_tol = 1e-10;
  int max_iterations = 400;
};

/// Smallest a >= 0 with E[min(X, a)] = b, by bracketing bisection.
double truncation_level(const Law& law, double b, Measure measure = Measure::P,
                        const RootOptions& options = {});

}  // namespace cptlab
