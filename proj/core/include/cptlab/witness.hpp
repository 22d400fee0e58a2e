#pragma once

#include <cstdint>
#include <vector>

#include "cptlab/choquet.hpp"
#include "cptlab/kernel.hpp"
#include "cptlab/preferences.hpp"
#include "cptlab/regime.hpp"

namespace cptlab {

/// A level of U kept together with 1 - U so that points near 1 keep their
/// precision.
struct Level {
  double u = 0.0;
  double w = 1.0;
  static Level from_u(double u) { return {u, 1.0 - u}; }
  static Level from_w(double w) { return {1.0 - w, w}; }
};

/// One piece of a payoff f(U) on [start, end):
///   Constant:  c
///   LowPower:  c * u^-k   (decreasing, positive)
///   HighPower: -c * (1-u)^-k   (decreasing, negative)
struct PayoffSegment {
  enum class Kind { Constant, LowPower, HighPower };
  Kind kind = Kind::Constant;
  Level start, end;
  double c = 0.0;
  double k = 0.0;

  double at(const Level& x) const;
  double first() const { return at(start); }
  double last() const { return at(end); }
  /// Level where the segment takes value x (x between first() and last()).
  Level inverse(double x) const;
  /// Integral of the segment over u (Q-measure of the piece).
  double integral() const;
};

/// Non-increasing payoff f(U) on (0, 1), piecewise as above.
class UPayoff {
 public:
  explicit UPayoff(std::vector<PayoffSegment> segments);

  double operator()(double u) const;
  double at(const Level& x) const;
  /// E_Q[f(U)] from per-segment antiderivatives.
  double mean_q() const;
  const std::vector<PayoffSegment>& segments() const noexcept { return segments_; }

 private:
  std::vector<PayoffSegment> segments_;
};

/// Law of f(U) under P for the given kernel: P{f(U) > x} = G_P(f^-1(x)).
Law payoff_law(const UPayoff& payoff, const KernelModel& model);

/// V+(f(U)+) and V-(f(U)-) by direct integration over u (Stieltjes form
/// against the exact P-law of U). Independent of the Choquet engine.
CptParts payoff_value_by_levels(const UPayoff& payoff, const KernelModel& model,
                                const CptSpec& spec);

enum class WitnessCause { AlphaGeBeta, BetaDeltaBelowOne, AlphaGammaAboveOne };

const char* to_string(WitnessCause cause) noexcept;
WitnessCause witness_cause_from_string(const char* text);
WitnessCause witness_cause_for(Cause cause);

struct WitnessRow {
  std::int64_t n = 0;
  double closed_form = 0.0;      // proof formula (or independent level integration)
  double numeric = 0.0;          // Choquet engine on the constructed law
  ExtendedValue::Kind numeric_kind = ExtendedValue::Kind::Finite;
  double budget_residual = 0.0;  // |E_Q[X_n] - x0|
  double truncation_level = 0.0; // a_n, construction 2 only
  double gains = 0.0;            // V+(X_n+) from the engine
  double losses = 0.0;           // V-(X_n-) from the engine
};

struct WitnessReport {
  WitnessCause cause = WitnessCause::AlphaGeBeta;
  double x0 = 0.0;
  double v = 0.0;
  // Construction constants (NaN when unused).
  double xi = 0.0;
  double chi = 0.0;
  double prob_a = 0.0;  // P(A) for construction 1, P{U >= 1/2} otherwise
  double q_a = 0.0;     // Q(A)
  std::int64_t n0 = 0;
  bool loss_side_certified = true;  // V-(Z) (construction 2) or V-(X_n-) finite
  std::vector<WitnessRow> rows;
};

/// Free constants of the constructions, at the midpoints of their intervals.
struct WitnessConstants {
  double xi = 0.0;
  double chi = 0.0;
};
WitnessConstants witness_constants(WitnessCause cause, const CptSpec& spec);

/// Construction 1: X_n = Y_{n0+n} - Z_{n0+n}, Y = N 1_A, Z = L 1_{A^c}.
WitnessReport witness_alpha_ge_beta(const CptSpec& spec, const KernelModel& model, double x0,
                                    const std::vector<std::int64_t>& indices);
/// Construction 2: X_n = (Y ^ n) - (Z ^ a_n), x0 = 0.
WitnessReport witness_beta_delta(const CptSpec& spec, const KernelModel& model,
                                 const std::vector<std::int64_t>& indices);
/// Construction 3: X_n = (Y ^ n) - 2 C_n 1{U >= 1/2}, x0 = 0.
WitnessReport witness_alpha_gamma(const CptSpec& spec, const KernelModel& model,
                                  const std::vector<std::int64_t>& indices);

/// Dispatch by cause; x0 is ignored (forced to 0) for constructions 2 and 3.
WitnessReport run_witness(WitnessCause cause, const CptSpec& spec, const KernelModel& model,
                          double x0, const std::vector<std::int64_t>& indices);

/// The n-th payoff of constructions 2 and 3 as a function of U.
UPayoff witness_payoff(WitnessCause cause, const CptSpec& spec, std::int64_t n);

/// The n-th payoff of construction 1 as a two-atom law.
Law witness_atoms(const CptSpec& spec, const KernelModel& model, double x0, std::int64_t n);

}  // namespace cptlab
