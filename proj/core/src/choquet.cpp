#include "cptlab/choquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cptlab/error.hpp"
#include "cptlab/quadrature.hpp"

namespace cptlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ExtendedValue atom_side(std::span<const Atom> atoms, const PreferenceSide& pref, Side side) {
  // Magnitudes on the requested side, ascending, with their P-masses.
  std::vector<std::pair<double, double>> pts;
  for (const auto& a : atoms) {
    const double m = side == Side::Upper ? a.value : -a.value;
    if (m > 0.0 && a.prob_p > 0.0) pts.emplace_back(m, a.prob_p);
  }
  if (side == Side::Lower) std::reverse(pts.begin(), pts.end());
  double tail = 0.0;
  std::vector<double> at_least(pts.size());
  for (std::size_t i = pts.size(); i-- > 0;) {
    tail += pts[i].second;
    at_least[i] = std::min(tail, 1.0);
  }
  double total = 0.0;
  double prev_u = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double u = pref.utility(pts[i].first);
    total += (u - prev_u) * pref.distortion(at_least[i]);
    prev_u = u;
  }
  return ExtendedValue::finite(total);
}

// Tail part of the Choquet integral beyond magnitude x_end where the
// magnitude's survival is c * x^-k.
ExtendedValue tail_part(const PowerTail& tail, double x_end, const PreferenceSide& pref,
                        bool light, const EngineOptions& options) {
  const double a = pref.utility_exponent;
  const double g = pref.distortion_exponent;
  const double e = tail.exponent * g / a;
  if (e <= 1.0) {
    if (light) return ExtendedValue::finite(0.0);
    return ExtendedValue::infinite(
        e, "survival tail exponent " + std::to_string(tail.exponent) +
               " gives integrand decay y^-" + std::to_string(e) + " with exponent <= 1");
  }
  const double p_end = std::min(1.0, tail.coef * std::pow(x_end, -tail.exponent));
  double value = 0.0;
  if (pref.form == Form::PurePower) {
    const double y_end = pref.utility(x_end);
    value = std::pow(tail.coef, g) * std::pow(y_end, 1.0 - e) / (e - 1.0);
  } else {
    // y = C (c/p)^(a/k); p = p_end * t^m flattens the p^(g - a/k - 1) endpoint factor.
    const double r = a / tail.exponent;
    const double m = 1.0 / (g - r);
    const double scale = pref.scale * std::pow(tail.coef, r) * r;
    auto integrand = [&](double t) {
      const double p = p_end * std::pow(t, m);
      if (p <= 0.0) return 0.0;
      return pref.distortion(p) * scale * std::pow(p, -r - 1.0) * m * p_end * std::pow(t, m - 1.0);
    };
    quad::Options q;
    q.abs_tol = options.abs_tol;
    q.rel_tol = options.rel_tol;
    value = quad::integrate(integrand, 0.0, 1.0, q).value;
  }
  if (!light && e <= 1.0 + options.suspect_margin) return ExtendedValue::suspected(value, e);
  return ExtendedValue::finite(value);
}

// Integral of a non-increasing integrand over [a, b] split at the cuts.
// Pieces spanning many decades are integrated in log y.
double integrate_pieces(const quad::Integrand& g, double a, double b, std::vector<double> cuts,
                        const EngineOptions& options) {
  cuts.push_back(a);
  cuts.push_back(b);
  if (a < 1.0 && b > 16.0) cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  quad::Options q;
  q.rel_tol = options.rel_tol;
  q.max_intervals = 20000;
  q.abs_tol = options.abs_tol / static_cast<double>(cuts.size());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (lo < a || hi > b || !(hi > lo)) continue;
    if (lo > 0.0 && hi / lo > 16.0) {
      auto in_log = [&](double t) {
        const double y = std::exp(t);
        return g(y) * y;
      };
      total += quad::integrate(in_log, std::log(lo), std::log(hi), q).value;
    } else {
      total += quad::integrate(g, lo, hi, q).value;
    }
  }
  return total;
}

ExtendedValue continuous_side(const Law& law, const PreferenceSide& pref, Side side,
                              const EngineOptions& options) {
  require(law.measure_tag() == Measure::P, ErrorCode::Precondition,
          "Choquet integrals need the law under P; got a Q-tagged law");
  const ContinuousLaw& body = law.body();
  require(body.tail_mismatch() <= options.tail_tol, ErrorCode::InconsistentTail,
          "fitted tail disagrees with the tabulated body (relative mismatch " +
              std::to_string(body.tail_mismatch()) + ")");
  const bool upper = side == Side::Upper;
  // Survival of the magnitude M on this side, for m > 0.
  auto survival = [&](double m) { return upper ? body.survival(m) : body.cdf_below(-m); };
  const double m_start = upper ? std::max(0.0, body.body_min()) : std::max(0.0, -body.body_max());
  const double m_end = upper ? body.body_max() : -body.body_min();
  const auto tail = upper ? body.upper_tail() : body.lower_tail();

  double total = 0.0;
  if (m_end > 0.0) {
    // Below m_start the survival is constant: its value times u(m_start).
    if (m_start > 0.0) total += pref.distortion(survival(0.5 * m_start)) * pref.utility(m_start);
    std::vector<double> cuts;
    for (double b : body.breakpoints()) {
      const double m = upper ? b : -b;
      if (m > m_start && m < m_end) cuts.push_back(pref.utility(m));
    }
    auto integrand = [&](double y) {
      return pref.distortion(std::clamp(survival(pref.inverse_utility(y)), 0.0, 1.0));
    };
    total += integrate_pieces(integrand, pref.utility(m_start), pref.utility(m_end), cuts, options);
  }
  if (!tail) return ExtendedValue::finite(total);
  const auto t = tail_part(*tail, std::max(m_end, 0.0), pref, body.all_moments_finite(), options);
  if (t.is_infinite()) return t;
  if (t.is_suspected()) return ExtendedValue::suspected(total + t.value(), t.tail_exponent());
  return ExtendedValue::finite(total + t.value());
}

}  // namespace

ExtendedValue side_choquet(const Law& law, const PreferenceSide& pref, Side side,
                           const EngineOptions& options) {
  if (law.is_discrete()) return atom_side(law.atoms(), pref, side);
  return continuous_side(law, pref, side, options);
}

ExtendedValue power_choquet(const Law& law, double utility_exponent, double distortion_exponent,
                            const EngineOptions& options) {
  require(law.nonnegative(), ErrorCode::NegativeSupport, "law must be nonnegative");
  return side_choquet(law, PreferenceSide::power(utility_exponent, distortion_exponent),
                      Side::Upper, options);
}

ExtendedValue choquet_plus(const Law& law, const CptSpec& spec, const EngineOptions& options) {
  require(law.nonnegative(), ErrorCode::NegativeSupport, "V+ needs a nonnegative law");
  return side_choquet(law, spec.gains(), Side::Upper, options);
}

ExtendedValue choquet_minus(const Law& law, const CptSpec& spec, const EngineOptions& options) {
  require(law.nonnegative(), ErrorCode::NegativeSupport,
          "V- needs the nonnegative law of the loss magnitude");
  return side_choquet(law, spec.losses(), Side::Upper, options);
}

CptParts cpt_parts(const Law& law, const CptSpec& spec, const EngineOptions& options) {
  const Law centered =
      spec.reference_point() == 0.0 ? law : law.shifted(-spec.reference_point());
  return {side_choquet(centered, spec.gains(), Side::Upper, options),
          side_choquet(centered, spec.losses(), Side::Lower, options)};
}

ExtendedValue cpt_value(const Law& law, const CptSpec& spec, const EngineOptions& options) {
  const auto parts = cpt_parts(law, spec, options);
  if (parts.losses.is_infinite()) {
    fail(ErrorCode::UndefinedFunctional,
         parts.gains.is_infinite() ? "V+(X+) and V-(X-) are both infinite"
                                   : "V-(X-) is infinite, so V(X) is undefined");
  }
  if (parts.gains.is_infinite()) return parts.gains;
  const double value = parts.gains.value() - parts.losses.value();
  if (parts.gains.is_suspected()) return ExtendedValue::suspected(value, parts.gains.tail_exponent());
  if (parts.losses.is_suspected())
    return ExtendedValue::suspected(value, parts.losses.tail_exponent());
  return ExtendedValue::finite(value);
}

double truncated_mean(const Law& law, double a, Measure measure) {
  require(law.nonnegative(), ErrorCode::NegativeSupport, "truncated mean needs a nonnegative law");
  require(a >= 0.0, ErrorCode::Domain, "truncation level must be nonnegative");
  if (law.is_discrete()) {
    double total = 0.0;
    for (const auto& atom : law.atoms())
      total += std::min(atom.value, a) * (measure == Measure::P ? atom.prob_p : atom.prob_q);
    return total;
  }
  require(law.measure_tag() == measure, ErrorCode::Precondition,
          std::string("continuous law is tagged with measure ") + to_string(law.measure_tag()));
  return law.body().truncated_mean(a);
}

ExtendedValue expectation(const Law& law, Measure measure) {
  require(law.nonnegative(), ErrorCode::NegativeSupport, "expectation needs a nonnegative law");
  if (!law.is_discrete()) {
    require(law.measure_tag() == measure, ErrorCode::Precondition,
            std::string("continuous law is tagged with measure ") + to_string(law.measure_tag()));
    const auto tail = law.body().upper_tail();
    if (tail && tail->exponent <= 1.0 && !law.body().all_moments_finite())
      return ExtendedValue::infinite(tail->exponent, "survival tail exponent <= 1");
  }
  return ExtendedValue::finite(law.mean(measure));
}

double truncation_level(const Law& law, double b, Measure measure, const RootOptions& options) {
  require(b >= 0.0 && std::isfinite(b), ErrorCode::Domain, "target b must be finite and >= 0");
  require(law.nonnegative(), ErrorCode::NegativeSupport, "truncation level needs a nonnegative law");
  if (b == 0.0) return 0.0;
  const auto mean = expectation(law, measure);
  if (mean.is_finite() && mean.value() < b - options.abs_tol) {
    fail(ErrorCode::Infeasible, "E[X] = " + std::to_string(mean.value()) +
                                    " is below the target b = " + std::to_string(b));
  }
  auto f = [&](double a) { return truncated_mean(law, a, measure); };
  // f(a) <= a, so every root is >= b.
  if (std::abs(f(b) - b) <= options.abs_tol) return b;
  double lo = b;
  double hi = law.support_max();
  if (std::isinf(hi)) {
    hi = 2.0 * b;
    int grow = 0;
    while (f(hi) < b) {
      lo = hi;
      hi *= 2.0;
      require(++grow < 2000 && std::isfinite(hi), ErrorCode::NonConvergence,
              "could not bracket the truncation level");
    }
  } else if (f(hi) < b) {
    // Target equals the mean up to tolerance.
    require(b - f(hi) <= options.abs_tol, ErrorCode::Infeasible, "target exceeds E[X]");
    return hi;
  }
  for (int it = 0; it < options.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (f(mid) < b) lo = mid;
    else hi = mid;
  }
  const double residual = std::abs(f(hi) - b);
  require(residual <= options.abs_tol, ErrorCode::NonConvergence,
          "truncation level residual " + std::to_string(residual) + " exceeds tolerance");
  return hi;
}

}  // namespace cptlab
