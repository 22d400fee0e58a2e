#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cptlab/kernel.hpp"
#include "cptlab/law.hpp"
#include "cptlab/preferences.hpp"

namespace cptlab {

enum class Lemma { EleqL, Lemeta, L1L2 };

const char* to_string(Lemma lemma) noexcept;
Lemma lemma_from_string(const std::string& text);

enum class AuditStatus { Pass, VacuousPass, Violation };

const char* to_string(AuditStatus status) noexcept;

using NamedValues = std::vector<std::pair<std::string, double>>;

struct AuditCase {
  Lemma lemma = Lemma::EleqL;
  NamedValues exponents;
  NamedValues constants;
  std::string family;  // description of the law's family
  double lhs = 0.0;
  double rhs = 0.0;
  AuditStatus status = AuditStatus::Pass;

  double slack() const { return rhs - lhs; }
  double constant(const std::string& name) const;
};

/// D = 1 / (b / (s a) - 1) from E[X^s] <= 1 + D (int P{X^b > y}^a dy)^(1/a).
double eleql_constant(double a, double b, double s);

struct L1L2Constants {
  double chi, xi, d, c1, c2, zeta, r1, r2;
};
/// chi, xi at the midpoints of (1/s, b/(s a)) and (chi a, b/s).
L1L2Constants l1l2_constants(double a, double b, double s);

struct LemetaConstants {
  double eta, lambda, p, q;
  double c1, c2, c3, c4, c5, c6, c7, d1, m1, m2, l1, l2;
};
/// Chain constants with eta, lambda, p, q at the midpoints of their intervals
/// and kernel moments from the log-normal closed form.
LemetaConstants lemeta_constants(const CptSpec& spec, const KernelModel& model, double x0);

AuditCase audit_eleql(double a, double b, double s, const Law& law);
AuditCase audit_l1l2(double a, double b, double s, const Law& law);
AuditCase audit_lemeta(const CptSpec& spec, const KernelModel& model, double x0, const Law& law);

struct AuditSummary {
  std::size_t cases = 0;
  std::size_t passes = 0;
  std::size_t vacuous = 0;
  std::size_t violations = 0;
  double min_zeta = 1.0;
  double max_zeta = 0.0;
};

/// Random corpus of admissible laws and exponents for one lemma. Case i uses
/// its own generator seeded from (seed, lemma, i), so the output does not
/// depend on the number of workers.
std::vector<AuditCase> run_audit_corpus(Lemma lemma, std::size_t size, std::uint64_t seed,
                                        double kernel_variance = 0.16);

AuditSummary summarize(const std::vector<AuditCase>& cases);

/// Upper bound on V(X) over feasible X for a well-posed pure-power spec:
/// max over t >= 0 of L1 + L2 R1 + L2 R2 t^zeta - t, with Lemeta at x0 and
/// L1L2 applied at (a, b, s) = (eta, beta, delta).
struct AnalyticBound {
  double value;
  LemetaConstants lemeta;
  L1L2Constants l1l2;
};
AnalyticBound analytic_bound(const CptSpec& spec, const KernelModel& model, double x0);

}  // namespace cptlab
