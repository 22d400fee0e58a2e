#include "cptlab/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cptlab/choquet.hpp"
#include "cptlab/error.hpp"
#include "cptlab/normal.hpp"
#include "cptlab/parallel.hpp"
#include "cptlab/regime.hpp"
#include "cptlab/witness.hpp"

namespace cptlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

AuditStatus status_of(double lhs, double rhs) {
  if (std::isinf(rhs)) return AuditStatus::VacuousPass;
  return lhs <= rhs ? AuditStatus::Pass : AuditStatus::Violation;
}

double value_or_inf(const ExtendedValue& v) { return v.is_infinite() ? kInf : v.value(); }

// Survival integral of one side of the law against the pure power pair.
double side_integral(const Law& law, double u, double w, Side side) {
  return value_or_inf(side_choquet(law, PreferenceSide::power(u, w), side));
}

// ---- random corpus -------------------------------------------------------

using Rng = std::mt19937_64;

Rng case_rng(std::uint64_t seed, Lemma lemma, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x61756469u /* "audi" */, static_cast<std::uint32_t>(lemma),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double gauss(Rng& rng) { return std::normal_distribution<double>()(rng); }

std::vector<double> random_weights(Rng& rng, std::size_t k) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(k);
  double sum = 0.0;
  for (auto& x : w) sum += (x = e(rng) + 1e-12);
  for (auto& x : w) x /= sum;
  return w;
}

struct FamilyLaw {
  std::string family;
  Law law;
};

FamilyLaw random_nonnegative_law(Rng& rng) {
  const int family = std::uniform_int_distribution<int>(0, 3)(rng);
  if (family == 0) {
    const auto k = static_cast<std::size_t>(std::uniform_int_distribution<int>(1, 20)(rng));
    const auto w = random_weights(rng, k);
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < k; ++i) {
      const double x = uniform(rng, 0.0, 1.0) < 0.2 ? 0.0 : std::exp(1.5 * gauss(rng));
      atoms.push_back({x, w[i], w[i]});
    }
    return {"atoms", Law::discrete(std::move(atoms))};
  }
  if (family == 1) {
    const double kappa = uniform(rng, 0.3, 3.0);
    const double xm = uniform(rng, 0.1, 2.0);
    const double ratio = std::exp(uniform(rng, std::log(10.0), std::log(1e4)));
    const double top = 1.0 - std::pow(ratio, -kappa);
    std::vector<GridNode> nodes;
    for (int i = 0; i <= 96; ++i) {
      const double t = i / 96.0;
      const double s = 1.0 - std::pow(1.0 - t, 3.0);
      const double x = i == 96 ? xm * ratio : xm * std::pow(1.0 - s * top, -1.0 / kappa);
      nodes.push_back({s, x});
    }
    return {"truncated_pareto", Law::quantile_grid(std::move(nodes), std::nullopt)};
  }
  if (family == 2) {
    const double kappa = uniform(rng, 0.3, 3.0);
    const double xm = uniform(rng, 0.1, 2.0);
    std::vector<GridNode> nodes;
    for (int i = 0; i <= 32; ++i) {
      const double s = 0.9 * i / 32.0;
      nodes.push_back({s, xm * std::pow(1.0 - s, -1.0 / kappa)});
    }
    return {"pareto",
            Law::quantile_grid(std::move(nodes), PowerTail{std::pow(xm, kappa), kappa})};
  }
  const double mu = uniform(rng, -1.0, 1.0);
  const double sigma = uniform(rng, 0.1, 1.5);
  const double z_max = 7.5;
  std::vector<GridNode> nodes{{0.0, 0.0}};
  for (int i = 0; i <= 400; ++i) {
    const double z = -z_max + 2.0 * z_max * i / 400.0;
    nodes.push_back({normal::cdf(z), std::exp(mu + sigma * z)});
  }
  const double x_end = nodes.back().value;
  const double kappa = normal::pdf(z_max) / (normal::sf(z_max) * sigma);
  const PowerTail tail{(1.0 - nodes.back().level) * std::pow(x_end, kappa), kappa};
  return {"lognormal", Law::quantile_grid(std::move(nodes), tail, std::nullopt, Measure::P, true)};
}

struct SignedCase {
  std::string family;
  Law law;
};

SignedCase random_budget_law(Rng& rng, const KernelModel& model, double x0) {
  if (uniform(rng, 0.0, 1.0) < 0.75) {
    const auto k = static_cast<std::size_t>(std::uniform_int_distribution<int>(2, 20)(rng));
    std::vector<double> cuts;
    for (std::size_t i = 0; i + 1 < k; ++i) cuts.push_back(1.0 / (1.0 + std::exp(-3.0 * gauss(rng))));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<double> edges{0.0};
    for (double c : cuts)
      if (c > 0.0 && c < 1.0) edges.push_back(c);
    edges.push_back(1.0);
    std::vector<Atom> atoms;
    double q_mean = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double value = 2.0 * gauss(rng) * std::exp(gauss(rng));
      const double width = edges[i + 1] - edges[i];
      atoms.push_back({value, model.mass_p(edges[i], edges[i + 1]), width});
      q_mean += value * width;
    }
    for (auto& a : atoms) a.value += x0 - q_mean;
    return {"u_cells", Law::discrete(std::move(atoms))};
  }
  using K = PayoffSegment::Kind;
  const double k_low = uniform(rng, 0.2, 3.0);
  const double k_high = uniform(rng, 0.2, 3.0);
  const double mid = uniform(rng, 0.2, 0.8);
  const double cap = std::exp(uniform(rng, 0.0, std::log(1e3)));
  const double u_cap = std::min(std::pow(cap, -1.0 / k_low), 0.5 * mid);
  const double w_cap = std::min(std::pow(cap, -1.0 / k_high), 0.5 * (1.0 - mid));
  UPayoff f({{K::Constant, Level::from_u(0.0), Level::from_u(u_cap), std::pow(u_cap, -k_low), 0.0},
             {K::LowPower, Level::from_u(u_cap), Level::from_u(mid), 1.0, k_low},
             {K::HighPower, Level::from_u(mid), Level::from_w(w_cap), 1.0, k_high},
             {K::Constant, Level::from_w(w_cap), Level::from_w(0.0), -std::pow(w_cap, -k_high), 0.0}});
  return {"u_payoff", payoff_law(f, model).shifted(x0 - f.mean_q())};
}

CptSpec random_well_posed(Rng& rng) {
  for (;;) {
    const double a = uniform(rng, 0.05, 1.0), b = uniform(rng, 0.05, 1.0);
    const double g = uniform(rng, 0.05, 1.0), d = uniform(rng, 0.05, 1.0);
    if (a < b && a < g && d < b) return CptSpec::power(a, b, g, d);
  }
}

}  // namespace

const char* to_string(Lemma lemma) noexcept {
  switch (lemma) {
    case Lemma::EleqL: return "eleql";
    case Lemma::Lemeta: return "lemeta";
    case Lemma::L1L2: return "l1l2";
  }
  return "eleql";
}

Lemma lemma_from_string(const std::string& text) {
  if (text == "eleql") return Lemma::EleqL;
  if (text == "lemeta") return Lemma::Lemeta;
  if (text == "l1l2") return Lemma::L1L2;
  fail(ErrorCode::InvalidParameter, "unknown lemma '" + text + "' (expected eleql, lemeta, l1l2)");
}

const char* to_string(AuditStatus status) noexcept {
  switch (status) {
    case AuditStatus::Pass: return "pass";
    case AuditStatus::VacuousPass: return "vacuous";
    case AuditStatus::Violation: return "violation";
  }
  return "pass";
}

double AuditCase::constant(const std::string& name) const {
  for (const auto& [key, value] : constants)
    if (key == name) return value;
  fail(ErrorCode::InvalidParameter, "audit case has no constant '" + name + "'");
}

double eleql_constant(double a, double b, double s) {
  require(a > 0.0 && b > 0.0 && s > 0.0, ErrorCode::Precondition, "EleqL needs a, b, s > 0");
  const double r = b / (s * a);
  require(r > 1.0, ErrorCode::Precondition, "EleqL needs b / (s a) > 1");
  return 1.0 / (r - 1.0);
}

L1L2Constants l1l2_constants(double a, double b, double s) {
  require(s > 0.0 && s < a && a < b && s <= 1.0, ErrorCode::Precondition,
          "L1L2 needs 0 < s < a < b and s <= 1");
  L1L2Constants c{};
  c.chi = 0.5 * (1.0 / s + b / (s * a));
  c.xi = 0.5 * (c.chi * a + b / s);
  c.d = eleql_constant(s, b, c.xi);  // E[X^xi] <= 1 + D (int P{X^b > y}^s)^(1/s)
  c.c1 = std::pow(c.d, s);
  c.c2 = 1.0 / (s * c.chi - 1.0);
  c.zeta = a * c.chi / c.xi;
  c.r1 = 1.0 + c.c2;
  c.r2 = c.c2 * std::pow(c.c1, c.zeta);
  return c;
}

LemetaConstants lemeta_constants(const CptSpec& spec, const KernelModel& model, double x0) {
  const double al = spec.alpha(), be = spec.beta(), ga = spec.gamma(), de = spec.delta();
  require(al < be && al < ga && de < be, ErrorCode::Precondition,
          "Lemeta needs alpha < beta and alpha / gamma < 1 < beta / delta");
  LemetaConstants c{};
  c.eta = 0.5 * (std::max(al, de) + be);
  c.lambda = 0.5 * (1.0 / ga + std::min(1.0 / al, c.eta / (al * ga)));
  c.p = 0.5 * (1.0 + 1.0 / (c.lambda * al));
  c.q = 0.5 * (std::max(1.0, al * c.lambda * ga / de) + c.eta / de);
  const double alg = al * c.lambda * ga;
  c.c1 = 1.0 / (c.lambda * ga - 1.0);
  c.c2 = std::pow(model.moment_p(-1.0 / (c.p - 1.0)), (c.p - 1.0) / c.p);
  c.c3 = std::pow(c.c2, ga);
  c.c4 = c.c3 * std::pow(std::abs(x0), alg);
  c.c5 = std::pow(model.moment_p(c.q / (c.q - 1.0)), alg * (c.q - 1.0) / c.q);
  c.c6 = c.c4 + 2.0 * c.c3 * c.c5;
  c.c7 = c.c3 * c.c5;
  c.d1 = eleql_constant(de, c.eta, c.q);
  c.m1 = c.c6 + c.c7;
  c.m2 = c.c7 * std::pow(c.d1, de);
  c.l1 = 1.0 + c.c1 * c.m1;
  c.l2 = c.c1 * c.m2;
  return c;
}

AuditCase audit_eleql(double a, double b, double s, const Law& law) {
  const double d = eleql_constant(a, b, s);
  require(law.nonnegative(), ErrorCode::Precondition, "EleqL audits nonnegative laws");
  AuditCase out;
  out.lemma = Lemma::EleqL;
  out.exponents = {{"a", a}, {"b", b}, {"s", s}};
  out.constants = {{"D", d}};
  out.lhs = side_integral(law, s, 1.0, Side::Upper);
  const double integral = side_integral(law, b, a, Side::Upper);
  out.rhs = std::isinf(integral) ? kInf : 1.0 + d * std::pow(integral, 1.0 / a);
  out.status = status_of(out.lhs, out.rhs);
  return out;
}

AuditCase audit_l1l2(double a, double b, double s, const Law& law) {
  const auto c = l1l2_constants(a, b, s);
  require(law.nonnegative(), ErrorCode::Precondition, "L1L2 audits nonnegative laws");
  AuditCase out;
  out.lemma = Lemma::L1L2;
  out.exponents = {{"a", a}, {"b", b}, {"s", s}};
  out.constants = {{"chi", c.chi}, {"xi", c.xi}, {"D", c.d},   {"C1", c.c1},
                   {"C2", c.c2},   {"R1", c.r1}, {"R2", c.r2}, {"zeta", c.zeta}};
  out.lhs = side_integral(law, a, s, Side::Upper);
  const double integral = side_integral(law, b, s, Side::Upper);
  out.rhs = std::isinf(integral) ? kInf : c.r1 + c.r2 * std::pow(integral, c.zeta);
  out.status = status_of(out.lhs, out.rhs);
  return out;
}

AuditCase audit_lemeta(const CptSpec& spec, const KernelModel& model, double x0, const Law& law) {
  const auto c = lemeta_constants(spec, model, x0);
  if (law.is_discrete()) {
    const double residual = std::abs(law.mean(Measure::Q) - x0);
    require(residual <= 1e-8 * std::max(1.0, std::abs(x0)), ErrorCode::Precondition,
            "Lemeta needs E_Q[X] = x0 (residual " + std::to_string(residual) + ")");
  }
  AuditCase out;
  out.lemma = Lemma::Lemeta;
  out.exponents = {{"alpha", spec.alpha()}, {"beta", spec.beta()}, {"gamma", spec.gamma()},
                   {"delta", spec.delta()}, {"eta", c.eta},        {"x0", x0}};
  out.constants = {{"lambda", c.lambda}, {"p", c.p},   {"q", c.q},   {"C1", c.c1},
                   {"C2", c.c2},         {"C3", c.c3}, {"C4", c.c4}, {"C5", c.c5},
                   {"C6", c.c6},         {"C7", c.c7}, {"D1", c.d1}, {"M1", c.m1},
                   {"M2", c.m2},         {"L1", c.l1}, {"L2", c.l2}};
  out.lhs = side_integral(law, spec.alpha(), spec.gamma(), Side::Upper);
  const double integral = side_integral(law, c.eta, spec.delta(), Side::Lower);
  const bool finite_chain = std::isfinite(c.l1) && std::isfinite(c.l2);
  out.rhs = std::isinf(integral) || !finite_chain ? kInf : c.l1 + c.l2 * integral;
  out.status = status_of(out.lhs, out.rhs);
  return out;
}

std::vector<AuditCase> run_audit_corpus(Lemma lemma, std::size_t size, std::uint64_t seed,
                                        double kernel_variance) {
  const auto model = KernelModel::from_variance(kernel_variance);
  std::vector<AuditCase> cases(size);
  parallel_for(size, [&](std::size_t i) {
    auto rng = case_rng(seed, lemma, i);
    if (lemma == Lemma::Lemeta) {
      const auto spec = random_well_posed(rng);
      const double x0 = uniform(rng, -2.0, 5.0);
      auto sample = random_budget_law(rng, model, x0);
      cases[i] = audit_lemeta(spec, model, x0, sample.law);
      cases[i].family = sample.family;
      return;
    }
    auto sample = random_nonnegative_law(rng);
    if (lemma == Lemma::EleqL) {
      const double s = uniform(rng, 0.1, 1.5);
      const double a = uniform(rng, 0.1, 1.5);
      const double b = s * a * uniform(rng, 1.05, 4.0);
      cases[i] = audit_eleql(a, b, s, sample.law);
    } else {
      const double s = uniform(rng, 0.1, 1.0);
      const double a = s * uniform(rng, 1.05, 3.0);
      const double b = a * uniform(rng, 1.05, 3.0);
      cases[i] = audit_l1l2(a, b, s, sample.law);
    }
    cases[i].family = sample.family;
  });
  return cases;
}

AuditSummary summarize(const std::vector<AuditCase>& cases) {
  AuditSummary s;
  s.cases = cases.size();
  for (const auto& c : cases) {
    switch (c.status) {
      case AuditStatus::Pass: ++s.passes; break;
      case AuditStatus::VacuousPass: ++s.vacuous; break;
      case AuditStatus::Violation: ++s.violations; break;
    }
    if (c.lemma == Lemma::L1L2) {
      const double z = c.constant("zeta");
      s.min_zeta = std::min(s.min_zeta, z);
      s.max_zeta = std::max(s.max_zeta, z);
    }
  }
  return s;
}

AnalyticBound analytic_bound(const CptSpec& spec, const KernelModel& model, double x0) {
  require(spec.form() == Form::PurePower, ErrorCode::Precondition,
          "the analytic bound is assembled for the pure power form only");
  const auto le = lemeta_constants(spec, model, x0);
  const auto ll = l1l2_constants(le.eta, spec.beta(), spec.delta());
  const double k = le.l2 * ll.r2;
  // At the maximiser k zeta t^(zeta-1) = 1, so k t^zeta - t = t (1/zeta - 1).
  const double t_star = std::exp(std::log(k * ll.zeta) / (1.0 - ll.zeta));
  const double value = le.l1 + le.l2 * ll.r1 + t_star * (1.0 / ll.zeta - 1.0);
  return {value, le, ll};
}

}  // namespace cptlab
