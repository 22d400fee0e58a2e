#include "cptlab/witness.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "cptlab/error.hpp"
#include "cptlab/normal.hpp"
#include "cptlab/parallel.hpp"
#include "cptlab/quadrature.hpp"

namespace cptlab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Length of [a, b) in u, using whichever representation is exact.
double span_of(const Level& a, const Level& b) {
  return a.u >= 0.5 ? a.w - b.w : b.u - a.u;
}

// P{U < x}.
double p_below(const KernelModel& m, const Level& x) {
  return x.u <= 0.5 ? m.cdf_p(x.u) : 1.0 - m.upper_p(x.w);
}

// P{U > x}.
double p_above(const KernelModel& m, const Level& x) {
  return x.u <= 0.5 ? 1.0 - m.cdf_p(x.u) : m.upper_p(x.w);
}

class PayoffLaw final : public ContinuousLaw {
 public:
  PayoffLaw(UPayoff payoff, KernelModel model) : f_(std::move(payoff)), model_(std::move(model)) {}

  // P{f(U) > x} = P{U < sup{u : f(u) > x}}.
  double survival(double x) const override {
    for (const auto& seg : f_.segments()) {
      if (seg.first() <= x) return p_below(model_, seg.start);
      if (seg.last() > x) continue;
      return p_below(model_, seg.inverse(x));
    }
    return 1.0;
  }

  // P{f(U) < x} = P{U > inf{u : f(u) < x}}.
  double cdf_below(double x) const override {
    const auto& segs = f_.segments();
    for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
      if (it->last() >= x) return p_above(model_, it->end);
      if (it->first() < x) continue;
      return p_above(model_, it->inverse(x));
    }
    return 1.0;
  }

  double quantile(double s) const override {
    require(s > 0.0 && s < 1.0, ErrorCode::Domain, "quantile level must lie in (0, 1)");
    // P{f(U) <= f(u)} = P{U >= u} = s.
    const double w = model_.degenerate()
                         ? s
                         : normal::cdf(normal::quantile(s) + std::sqrt(model_.total_variance()));
    return f_.at(Level::from_w(w));
  }

  double body_min() const override { return f_.segments().back().last(); }
  double body_max() const override { return f_.segments().front().first(); }
  bool all_moments_finite() const override { return true; }

  std::vector<double> breakpoints() const override {
    std::vector<double> out;
    for (const auto& seg : f_.segments()) {
      out.push_back(seg.first());
      out.push_back(seg.last());
    }
    return out;
  }

 private:
  UPayoff f_;
  KernelModel model_;
};

// Y ^ n with Y = U^(-1/xi) on {U < 1/2}, zero above.
std::vector<PayoffSegment> capped_gain(double xi, double n) {
  using K = PayoffSegment::Kind;
  const Level half = Level::from_u(0.5);
  const double u_n = std::pow(n, -xi);
  if (u_n >= 0.5) return {{K::Constant, Level::from_u(0.0), half, n, 0.0}};
  return {{K::Constant, Level::from_u(0.0), Level::from_u(u_n), n, 0.0},
          {K::LowPower, Level::from_u(u_n), half, 1.0, 1.0 / xi}};
}

// -(Z ^ a) with Z = (1-U)^(-1/chi) on {U >= 1/2}.
std::vector<PayoffSegment> capped_loss(double chi, double a) {
  using K = PayoffSegment::Kind;
  const Level half = Level::from_u(0.5);
  const Level top = Level::from_w(0.0);
  const double w_a = std::pow(a, -chi);
  if (w_a >= 0.5) return {{K::Constant, half, top, -a, 0.0}};
  return {{K::HighPower, half, Level::from_w(w_a), 1.0, 1.0 / chi},
          {K::Constant, Level::from_w(w_a), top, -a, 0.0}};
}

double segments_mean(const std::vector<PayoffSegment>& segs) {
  double total = 0.0;
  for (const auto& s : segs) total += s.integral();
  return total;
}

void check_indices(const std::vector<std::int64_t>& indices, std::int64_t lowest) {
  for (auto n : indices)
    require(n >= lowest, ErrorCode::InvalidParameter,
            "witness index must be >= " + std::to_string(lowest));
}

// Event A = {U < u_A} or {U >= u_A} for construction 1.
struct EventA {
  bool upper = true;  // A = {U >= level}
  Level level = Level::from_u(0.5);
  double p = 0.5;     // P(A)
  double q = 0.5;     // Q(A)
};

// Leading coefficient of V(X_n) / N^alpha when alpha = beta and A = {U < u}.
double balanced_coefficient(const CptSpec& spec, const KernelModel& model, double u) {
  const double p = model.cdf_p(u);
  const double ratio = std::pow(u / (1.0 - u), spec.alpha());
  return spec.c_plus() * spec.gains().distortion(p) -
         spec.c_minus() * spec.losses().distortion(1.0 - p) * ratio;
}

EventA choose_event(const CptSpec& spec, const KernelModel& model) {
  EventA a;
  if (spec.alpha() > spec.beta()) {
    a.p = model.upper_p(0.5);
    return a;
  }
  // alpha == beta: gains on the cheap side {U < u}; prefer Q(A) = 1/2.
  a.upper = false;
  double best_u = 0.5;
  double best = balanced_coefficient(spec, model, 0.5);
  if (!(best > 0.0)) {
    for (int i = 1; i < 2000; ++i) {
      const double z = -9.0 + 18.0 * i / 2000.0;
      const double u = 1.0 / (1.0 + std::exp(-z));
      const double h = balanced_coefficient(spec, model, u);
      if (h > best) {
        best = h;
        best_u = u;
      }
    }
    if (best > 0.0) {
      const double z0 = std::log(best_u / (1.0 - best_u));
      auto neg = [&](double z) {
        return -balanced_coefficient(spec, model, 1.0 / (1.0 + std::exp(-z)));
      };
      const auto r = boost::math::tools::brent_find_minima(neg, z0 - 0.01, z0 + 0.01, 50);
      if (-r.second > best) best_u = 1.0 / (1.0 + std::exp(-r.first));
    }
    require(best > 0.0, ErrorCode::Precondition,
            "alpha = beta: no two-point event A makes the leading coefficient positive for "
            "these distortions and kernel");
  }
  a.level = Level::from_u(best_u);
  a.p = model.cdf_p(best_u);
  a.q = best_u;
  return a;
}

}  // namespace

double PayoffSegment::at(const Level& x) const {
  switch (kind) {
    case Kind::Constant: return c;
    case Kind::LowPower: return c * std::pow(x.u, -k);
    case Kind::HighPower: return -c * std::pow(x.w, -k);
  }
  return c;
}

Level PayoffSegment::inverse(double x) const {
  switch (kind) {
    case Kind::Constant: return start;
    case Kind::LowPower: return Level::from_u(std::pow(c / x, 1.0 / k));
    case Kind::HighPower: return Level::from_w(std::pow(c / -x, 1.0 / k));
  }
  return start;
}

double PayoffSegment::integral() const {
  switch (kind) {
    case Kind::Constant: return c * span_of(start, end);
    case Kind::LowPower:
      if (k == 1.0) return c * std::log(end.u / start.u);
      return c * (std::pow(end.u, 1.0 - k) - std::pow(start.u, 1.0 - k)) / (1.0 - k);
    case Kind::HighPower:
      if (k == 1.0) return -c * std::log(start.w / end.w);
      return -c * (std::pow(start.w, 1.0 - k) - std::pow(end.w, 1.0 - k)) / (1.0 - k);
  }
  return 0.0;
}

UPayoff::UPayoff(std::vector<PayoffSegment> segments) : segments_(std::move(segments)) {
  require(!segments_.empty(), ErrorCode::InvalidParameter, "payoff needs at least one segment");
  require(segments_.front().start.u == 0.0 && segments_.back().end.w == 0.0,
          ErrorCode::InvalidParameter, "payoff segments must cover (0, 1)");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    require(span_of(s.start, s.end) > 0.0, ErrorCode::InvalidParameter, "empty payoff segment");
    require(s.first() >= s.last(), ErrorCode::InvalidParameter, "payoff must be non-increasing");
    if (i > 0) {
      const double prev = segments_[i - 1].last();
      require(prev >= s.first() - 1e-12 * std::abs(s.first()), ErrorCode::InvalidParameter,
              "payoff must be non-increasing across segments");
    }
  }
}

double UPayoff::at(const Level& x) const {
  for (const auto& s : segments_) {
    const bool before_end = x.u < 0.5 ? x.u < s.end.u : x.w > s.end.w;
    if (before_end) return s.at(x);
  }
  return segments_.back().last();
}

double UPayoff::operator()(double u) const { return at(Level::from_u(u)); }

double UPayoff::mean_q() const { return segments_mean(segments_); }

Law payoff_law(const UPayoff& payoff, const KernelModel& model) {
  return Law::continuous(std::make_shared<PayoffLaw>(payoff, model), Measure::P);
}

CptParts payoff_value_by_levels(const UPayoff& payoff, const KernelModel& model,
                                const CptSpec& spec) {
  const auto gains = spec.gains();
  const auto losses = spec.losses();
  quad::Options q;
  q.abs_tol = 1e-13;
  q.rel_tol = 1e-12;
  double v_plus = 0.0, v_minus = 0.0;
  const auto& segs = payoff.segments();
  auto pos = [](double x) { return std::max(x, 0.0); };
  auto neg = [](double x) { return std::max(-x, 0.0); };
  // Gains: f+ falls from f(0+) as u grows; each drop at level u carries weight
  // w+(P{U < u}). Losses: f- rises with u; each rise carries w-(P{U > u}).
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& s = segs[i];
    const double next_first = i + 1 < segs.size() ? segs[i + 1].first() : 0.0;
    if (s.kind == PayoffSegment::Kind::LowPower && s.last() > 0.0) {
      // u+(c u^-k) = S c^a u^-ak; integrate in t = ln u.
      const double a = gains.utility_exponent;
      const double coef = gains.scale * std::pow(s.c, a) * a * s.k;
      auto g = [&](double t) {
        const double u = std::exp(t);
        return gains.distortion(model.cdf_p(u)) * coef * std::pow(u, -a * s.k);
      };
      v_plus += quad::integrate(g, std::log(s.start.u), std::log(s.end.u), q).value;
    }
    if (s.kind == PayoffSegment::Kind::HighPower && s.first() < 0.0) {
      const double b = losses.utility_exponent;
      const double coef = losses.scale * std::pow(s.c, b) * b * s.k;
      auto g = [&](double t) {
        const double w = std::exp(t);
        return losses.distortion(model.upper_p(w)) * coef * std::pow(w, -b * s.k);
      };
      v_minus += quad::integrate(g, std::log(s.end.w), std::log(s.start.w), q).value;
    }
    // Jump at the right end of the segment.
    const double drop = gains.utility(pos(s.last())) - gains.utility(pos(next_first));
    if (drop > 0.0) v_plus += gains.distortion(p_below(model, s.end)) * drop;
  }
  // Jumps in the loss magnitude at the left end of each segment.
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& s = segs[i];
    const double prev_last = i > 0 ? segs[i - 1].last() : 0.0;
    const double rise = losses.utility(neg(s.first())) - losses.utility(neg(prev_last));
    if (rise > 0.0) v_minus += losses.distortion(p_above(model, s.start)) * rise;
  }
  return {ExtendedValue::finite(v_plus), ExtendedValue::finite(v_minus)};
}

const char* to_string(WitnessCause cause) noexcept {
  switch (cause) {
    case WitnessCause::AlphaGeBeta: return "a_ge_b";
    case WitnessCause::BetaDeltaBelowOne: return "bd_lt_1";
    case WitnessCause::AlphaGammaAboveOne: return "ag_gt_1";
  }
  return "a_ge_b";
}

WitnessCause witness_cause_from_string(const char* text) {
  if (std::strcmp(text, "a_ge_b") == 0) return WitnessCause::AlphaGeBeta;
  if (std::strcmp(text, "bd_lt_1") == 0) return WitnessCause::BetaDeltaBelowOne;
  if (std::strcmp(text, "ag_gt_1") == 0) return WitnessCause::AlphaGammaAboveOne;
  fail(ErrorCode::InvalidParameter,
       std::string("unknown witness cause '") + text + "' (expected a_ge_b, bd_lt_1, ag_gt_1)");
}

WitnessCause witness_cause_for(Cause cause) {
  switch (cause) {
    case Cause::AlphaGeBeta: return WitnessCause::AlphaGeBeta;
    case Cause::BetaDeltaBelowOne: return WitnessCause::BetaDeltaBelowOne;
    case Cause::AlphaGammaAboveOne: return WitnessCause::AlphaGammaAboveOne;
    default: break;
  }
  fail(ErrorCode::Regime, "cause " + std::string(to_string(cause)) + " has no witness construction");
}

WitnessConstants witness_constants(WitnessCause cause, const CptSpec& spec) {
  const double a = spec.alpha(), b = spec.beta(), g = spec.gamma(), d = spec.delta();
  switch (cause) {
    case WitnessCause::AlphaGeBeta:
      require(a >= b, ErrorCode::Precondition, "construction 1 needs alpha >= beta");
      return {kNaN, kNaN};
    case WitnessCause::BetaDeltaBelowOne:
      require(b < d, ErrorCode::Precondition, "construction 2 needs beta / delta < 1");
      return {0.5 * a / g, 0.5 * (b / d + 1.0)};
    case WitnessCause::AlphaGammaAboveOne:
      require(a > g, ErrorCode::Precondition, "construction 3 needs alpha / gamma > 1");
      return {0.5 * (1.0 + a / g), kNaN};
  }
  return {kNaN, kNaN};
}

Law witness_atoms(const CptSpec& spec, const KernelModel& model, double x0, std::int64_t n) {
  witness_constants(WitnessCause::AlphaGeBeta, spec);
  const auto event = choose_event(spec, model);
  const double n0 = std::max(0.0, std::ceil(x0 / event.q));
  const double big = n0 + static_cast<double>(n);
  const double level = (big * event.q - x0) / (1.0 - event.q);
  return Law::discrete({{big, event.p, event.q}, {-level, 1.0 - event.p, 1.0 - event.q}});
}

UPayoff witness_payoff(WitnessCause cause, const CptSpec& spec, std::int64_t n) {
  require(n >= 1, ErrorCode::InvalidParameter, "witness index must be >= 1");
  const auto k = witness_constants(cause, spec);
  require(cause != WitnessCause::AlphaGeBeta, ErrorCode::InvalidParameter,
          "construction 1 is a two-atom law; use witness_atoms");
  auto segs = capped_gain(k.xi, static_cast<double>(n));
  const double b_n = segments_mean(segs);
  if (cause == WitnessCause::AlphaGammaAboveOne) {
    segs.push_back({PayoffSegment::Kind::Constant, Level::from_u(0.5), Level::from_w(0.0),
                    -2.0 * b_n, 0.0});
    return UPayoff(std::move(segs));
  }
  const double two_chi = std::pow(2.0, 1.0 / k.chi);
  const Law z_q = Law::quantile_grid({{0.0, 0.0}, {0.5, 0.0}, {0.5, two_chi}}, PowerTail{1.0, k.chi},
                                     std::nullopt, Measure::Q);
  const double a_n = truncation_level(z_q, b_n, Measure::Q);
  for (auto& s : capped_loss(k.chi, a_n)) segs.push_back(s);
  return UPayoff(std::move(segs));
}

WitnessReport witness_alpha_ge_beta(const CptSpec& spec, const KernelModel& model, double x0,
                                    const std::vector<std::int64_t>& indices) {
  witness_constants(WitnessCause::AlphaGeBeta, spec);
  check_indices(indices, 0);
  const auto event = choose_event(spec, model);
  WitnessReport report;
  report.cause = WitnessCause::AlphaGeBeta;
  report.x0 = x0;
  report.v = model.total_variance();
  report.xi = kNaN;
  report.chi = kNaN;
  report.prob_a = event.p;
  report.q_a = event.q;
  report.n0 = static_cast<std::int64_t>(std::max(0.0, std::ceil(x0 / event.q)));
  report.rows.resize(indices.size());
  parallel_for(indices.size(), [&](std::size_t i) {
    const auto n = indices[i];
    const Law law = witness_atoms(spec, model, x0, n);
    const double big = static_cast<double>(report.n0 + n);
    const double level = (big * event.q - x0) / (1.0 - event.q);
    auto& row = report.rows[i];
    row.n = n;
    row.closed_form = utility_plus(spec, big) * distortion_plus(spec, event.p) -
                      utility_minus(spec, std::max(level, 0.0)) *
                          distortion_minus(spec, 1.0 - event.p);
    const auto parts = cpt_parts(law, spec);
    const auto value = cpt_value(law, spec);
    row.numeric = value.value();
    row.numeric_kind = value.kind();
    row.gains = parts.gains.value();
    row.losses = parts.losses.value();
    row.budget_residual = std::abs(law.mean(Measure::Q) - x0);
    row.truncation_level = kNaN;
  });
  return report;
}

namespace {

WitnessReport continuous_witness(WitnessCause cause, const CptSpec& spec, const KernelModel& model,
                                 const std::vector<std::int64_t>& indices) {
  const auto k = witness_constants(cause, spec);
  check_indices(indices, 1);
  WitnessReport report;
  report.cause = cause;
  report.x0 = 0.0;
  report.v = model.total_variance();
  report.xi = k.xi;
  report.chi = k.chi;
  report.prob_a = model.upper_p(0.5);
  report.q_a = 0.5;
  // Construction 2 rests on V-(Z) < inf, i.e. delta chi / beta > 1.
  report.loss_side_certified =
      cause != WitnessCause::BetaDeltaBelowOne || spec.delta() * k.chi > spec.beta();
  report.rows.resize(indices.size());
  parallel_for(indices.size(), [&](std::size_t i) {
    const auto n = indices[i];
    const UPayoff payoff = witness_payoff(cause, spec, n);
    auto& row = report.rows[i];
    row.n = n;
    const auto levels = payoff_value_by_levels(payoff, model, spec);
    double closed_losses = levels.losses.value();
    if (cause == WitnessCause::AlphaGammaAboveOne) {
      const double c_n = -0.5 * payoff.segments().back().c;
      closed_losses = utility_minus(spec, 2.0 * c_n) * distortion_minus(spec, model.upper_p(0.5));
      row.truncation_level = kNaN;
    } else {
      row.truncation_level = -payoff.segments().back().c;
    }
    row.closed_form = levels.gains.value() - closed_losses;
    const Law law = payoff_law(payoff, model);
    const auto parts = cpt_parts(law, spec);
    const auto value = cpt_value(law, spec);
    row.numeric = value.value();
    row.numeric_kind = value.kind();
    row.gains = parts.gains.value();
    row.losses = parts.losses.value();
    row.budget_residual = std::abs(payoff.mean_q());
  });
  return report;
}

}  // namespace

WitnessReport witness_beta_delta(const CptSpec& spec, const KernelModel& model,
                                 const std::vector<std::int64_t>& indices) {
  return continuous_witness(WitnessCause::BetaDeltaBelowOne, spec, model, indices);
}

WitnessReport witness_alpha_gamma(const CptSpec& spec, const KernelModel& model,
                                  const std::vector<std::int64_t>& indices) {
  return continuous_witness(WitnessCause::AlphaGammaAboveOne, spec, model, indices);
}

WitnessReport run_witness(WitnessCause cause, const CptSpec& spec, const KernelModel& model,
                          double x0, const std::vector<std::int64_t>& indices) {
  if (cause == WitnessCause::AlphaGeBeta) return witness_alpha_ge_beta(spec, model, x0, indices);
  return continuous_witness(cause, spec, model, indices);
}

}  // namespace cptlab
