#include "cptlab/law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cptlab/error.hpp"
#include "cptlab/extended_value.hpp"
#include "cptlab/quadrature.hpp"

namespace cptlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Integral of c * x^-k over [lo, hi], 0 < lo <= hi <= +inf.
double power_tail_integral(double c, double k, double lo, double hi) {
  if (hi <= lo) return 0.0;
  if (k == 1.0) return std::isinf(hi) ? kInf : c * std::log(hi / lo);
  if (std::isinf(hi)) return k > 1.0 ? c * std::pow(lo, 1.0 - k) / (k - 1.0) : kInf;
  return c * (std::pow(hi, 1.0 - k) - std::pow(lo, 1.0 - k)) / (1.0 - k);
}

}  // namespace

const char* to_string(Measure measure) noexcept { return measure == Measure::P ? "P" : "Q"; }

const char* to_string(ExtendedValue::Kind kind) noexcept {
  switch (kind) {
    case ExtendedValue::Kind::Finite: return "Finite";
    case ExtendedValue::Kind::PosInfinite: return "PosInfinite";
    case ExtendedValue::Kind::DivergenceSuspected: return "DivergenceSuspected";
  }
  return "Finite";
}

double ContinuousLaw::truncated_mean(double a) const {
  require(a >= 0.0, ErrorCode::Domain, "truncation level must be nonnegative");
  require(body_min() >= 0.0 && !lower_tail(), ErrorCode::NegativeSupport,
          "truncated mean requires a nonnegative law");
  if (a == 0.0) return 0.0;
  const auto cuts = breakpoints();
  quad::Options opts;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-13;
  const double body_end = std::min(a, body_max());
  double total = quad::integrate([this](double x) { return survival(x); }, 0.0, body_end, cuts, opts)
                     .value;
  if (a > body_max()) {
    if (const auto tail = upper_tail()) {
      total += power_tail_integral(tail->coef, tail->exponent, body_max(), a);
    }
  }
  return total;
}

std::vector<GridNode> ContinuousLaw::tabulate(int points) const {
  points = std::max(points, 2);
  std::vector<GridNode> out;
  out.reserve(static_cast<std::size_t>(points));
  const bool lower = lower_tail().has_value();
  const bool upper = upper_tail().has_value();
  for (int i = 0; i < points; ++i) {
    double s = static_cast<double>(i) / (points - 1);
    if (i == 0 && !lower) {
      out.push_back({0.0, body_min()});
      continue;
    }
    if (i == points - 1 && !upper) {
      out.push_back({1.0, body_max()});
      continue;
    }
    s = std::clamp(s, 1e-9, 1.0 - 1e-9);
    out.push_back({s, quantile(s)});
  }
  return out;
}

TabulatedQuantile::TabulatedQuantile(std::vector<GridNode> nodes, std::optional<PowerTail> upper,
                                     std::optional<PowerTail> lower, bool light_tails)
    : nodes_(std::move(nodes)), upper_(upper), lower_(lower), light_tails_(light_tails) {
  require(!nodes_.empty(), ErrorCode::InvalidParameter, "quantile grid needs at least one node");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    require(n.level >= 0.0 && n.level <= 1.0, ErrorCode::InvalidParameter,
            "quantile grid level outside [0, 1]");
    require(std::isfinite(n.value), ErrorCode::InvalidParameter,
            "quantile grid values must be finite");
    if (i > 0) {
      require(n.level >= nodes_[i - 1].level, ErrorCode::InvalidParameter,
              "quantile grid levels must be non-decreasing");
      require(n.value >= nodes_[i - 1].value, ErrorCode::InvalidParameter,
              "quantile grid values must be non-decreasing");
    }
  }
  if (upper_) {
    require(upper_->coef > 0.0 && upper_->exponent > 0.0, ErrorCode::InvalidParameter,
            "upper tail needs positive coefficient and exponent");
    require(nodes_.back().level < 1.0, ErrorCode::InvalidParameter,
            "upper tail requires the grid to stop below level 1");
    require(nodes_.back().value > 0.0, ErrorCode::InvalidParameter,
            "upper tail must start at a positive value");
  } else {
    require(nodes_.back().level == 1.0, ErrorCode::InvalidParameter,
            "grid must reach level 1 unless an upper tail is given");
  }
  if (lower_) {
    require(lower_->coef > 0.0 && lower_->exponent > 0.0, ErrorCode::InvalidParameter,
            "lower tail needs positive coefficient and exponent");
    require(nodes_.front().level > 0.0, ErrorCode::InvalidParameter,
            "lower tail requires the grid to start above level 0");
    require(nodes_.front().value < 0.0, ErrorCode::InvalidParameter,
            "lower tail must start at a negative value");
  } else {
    require(nodes_.front().level == 0.0, ErrorCode::InvalidParameter,
            "grid must start at level 0 unless a lower tail is given");
  }
}

double TabulatedQuantile::survival(double x) const {
  const auto& first = nodes_.front();
  const auto& last = nodes_.back();
  if (x >= last.value) {
    if (upper_) return std::min(1.0, upper_->coef * std::pow(x, -upper_->exponent));
    return 0.0;
  }
  if (x < first.value) {
    if (lower_) return 1.0 - std::min(1.0, lower_->coef * std::pow(-x, -lower_->exponent));
    return 1.0;
  }
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x,
                             [](double v, const GridNode& n) { return v < n.value; });
  const auto k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  const auto& lo = nodes_[k];
  const auto& hi = nodes_[k + 1];
  const double t = (x - lo.value) / (hi.value - lo.value);
  return (1.0 - lo.level) - (hi.level - lo.level) * t;
}

double TabulatedQuantile::cdf_below(double x) const {
  const auto& first = nodes_.front();
  const auto& last = nodes_.back();
  if (x > last.value) {
    if (upper_) return 1.0 - std::min(1.0, upper_->coef * std::pow(x, -upper_->exponent));
    return 1.0;
  }
  if (x <= first.value) {
    if (lower_) return std::min(1.0, lower_->coef * std::pow(-x, -lower_->exponent));
    return 0.0;
  }
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x,
                             [](const GridNode& n, double v) { return n.value < v; });
  const auto k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  const auto& lo = nodes_[k];
  const auto& hi = nodes_[k + 1];
  const double t = (x - lo.value) / (hi.value - lo.value);
  return lo.level + (hi.level - lo.level) * t;
}

double TabulatedQuantile::quantile(double s) const {
  require(s > 0.0 && s < 1.0, ErrorCode::Domain, "quantile level must lie in (0, 1)");
  const auto& first = nodes_.front();
  const auto& last = nodes_.back();
  if (s < first.level) return -std::pow(lower_->coef / s, 1.0 / lower_->exponent);
  if (s > last.level) return std::pow(upper_->coef / (1.0 - s), 1.0 / upper_->exponent);
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), s,
                             [](const GridNode& n, double v) { return n.level < v; });
  if (it == nodes_.begin()) return first.value;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  return lo.value + (hi.value - lo.value) * (s - lo.level) / (hi.level - lo.level);
}

std::vector<double> TabulatedQuantile::breakpoints() const {
  std::vector<double> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) {
    if (out.empty() || out.back() != n.value) out.push_back(n.value);
  }
  return out;
}

double TabulatedQuantile::truncated_mean(double a) const {
  require(a >= 0.0, ErrorCode::Domain, "truncation level must be nonnegative");
  require(nodes_.front().value >= 0.0 && !lower_, ErrorCode::NegativeSupport,
          "truncated mean requires a nonnegative law");
  if (a == 0.0) return 0.0;
  double total = std::min(a, nodes_.front().value);
  for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
    const auto& lo = nodes_[k];
    const auto& hi = nodes_[k + 1];
    if (hi.value <= lo.value) continue;
    if (a <= lo.value) break;
    const double width = hi.value - lo.value;
    const double t = std::min(a, hi.value) - lo.value;
    total += t * (1.0 - lo.level) - (hi.level - lo.level) * t * t / (2.0 * width);
  }
  if (upper_ && a > nodes_.back().value) {
    total += power_tail_integral(upper_->coef, upper_->exponent, nodes_.back().value, a);
  }
  return total;
}

double TabulatedQuantile::tail_mismatch() const {
  double worst = 0.0;
  if (upper_) {
    const auto& last = nodes_.back();
    const double mass = 1.0 - last.level;
    const double fitted = upper_->coef * std::pow(last.value, -upper_->exponent);
    worst = std::max(worst, std::abs(fitted - mass) / mass);
  }
  if (lower_) {
    const auto& first = nodes_.front();
    const double fitted = lower_->coef * std::pow(-first.value, -lower_->exponent);
    worst = std::max(worst, std::abs(fitted - first.level) / first.level);
  }
  return worst;
}

std::vector<GridNode> TabulatedQuantile::tabulate(int) const { return nodes_; }

Law Law::discrete(std::vector<Atom> atoms) {
  require(!atoms.empty(), ErrorCode::InvalidParameter, "discrete law needs at least one atom");
  for (const auto& a : atoms) {
    require(std::isfinite(a.value), ErrorCode::InvalidParameter, "atom values must be finite");
    require(a.prob_p >= 0.0 && a.prob_p <= 1.0 && a.prob_q >= 0.0 && a.prob_q <= 1.0,
            ErrorCode::InvalidParameter, "atom probabilities must lie in [0, 1]");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& l, const Atom& r) { return l.value < r.value; });
  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  double sum_p = 0.0, sum_q = 0.0;
  for (const auto& a : atoms) {
    sum_p += a.prob_p;
    sum_q += a.prob_q;
    if (a.prob_p == 0.0 && a.prob_q == 0.0) continue;
    if (!merged.empty() && merged.back().value == a.value) {
      merged.back().prob_p += a.prob_p;
      merged.back().prob_q += a.prob_q;
    } else {
      merged.push_back(a);
    }
  }
  require(std::abs(sum_p - 1.0) <= 1e-12 && std::abs(sum_q - 1.0) <= 1e-12,
          ErrorCode::InvalidParameter,
          "atom probabilities must sum to one under both measures (P sum " +
              std::to_string(sum_p) + ", Q sum " + std::to_string(sum_q) + ")");
  Law law;
  law.kind_ = Kind::DiscreteAtoms;
  law.atoms_ = std::move(merged);
  return law;
}

Law Law::constant(double value) { return discrete({{value, 1.0, 1.0}}); }

Law Law::continuous(std::shared_ptr<const ContinuousLaw> body, Measure tag) {
  require(body != nullptr, ErrorCode::InvalidParameter, "continuous law body is null");
  Law law;
  law.kind_ = Kind::QuantileGrid;
  law.body_ = std::move(body);
  law.tag_ = tag;
  return law;
}

Law Law::quantile_grid(std::vector<GridNode> nodes, std::optional<PowerTail> upper,
                       std::optional<PowerTail> lower, Measure tag, bool light_tails) {
  return continuous(
      std::make_shared<TabulatedQuantile>(std::move(nodes), upper, lower, light_tails), tag);
}

const ContinuousLaw& Law::body() const {
  require(body_ != nullptr, ErrorCode::InvalidParameter, "law has no continuous body");
  return *body_;
}

bool Law::nonnegative() const {
  if (is_discrete()) return atoms_.front().value >= 0.0;
  return !body_->lower_tail() && body_->body_min() >= 0.0;
}

double Law::support_min() const {
  if (is_discrete()) return atoms_.front().value;
  return body_->lower_tail() ? -kInf : body_->body_min();
}

double Law::support_max() const {
  if (is_discrete()) return atoms_.back().value;
  return body_->upper_tail() ? kInf : body_->body_max();
}

double Law::mean(Measure measure) const {
  if (is_discrete()) {
    double total = 0.0;
    for (const auto& a : atoms_) total += a.value * (measure == Measure::P ? a.prob_p : a.prob_q);
    return total;
  }
  require(measure == tag_, ErrorCode::Precondition,
          std::string("continuous law is tagged with measure ") + to_string(tag_));
  const auto& b = *body_;
  const auto cuts = b.breakpoints();
  quad::Options opts;
  opts.abs_tol = 1e-13;
  double positive = 0.0, negative = 0.0;
  if (b.body_max() > 0.0) {
    positive = quad::integrate([&](double x) { return b.survival(x); }, std::max(0.0, b.body_min()),
                               b.body_max(), cuts, opts)
                   .value +
               std::max(0.0, b.body_min());
    if (const auto tail = b.upper_tail())
      positive += power_tail_integral(tail->coef, tail->exponent, b.body_max(), kInf);
  } else if (const auto tail = b.upper_tail()) {
    positive = power_tail_integral(tail->coef, tail->exponent, b.body_max(), kInf);
  }
  if (b.body_min() < 0.0) {
    std::vector<double> neg_cuts;
    for (double c : cuts) neg_cuts.push_back(-c);
    negative = quad::integrate([&](double t) { return b.cdf_below(-t); },
                               std::max(0.0, -b.body_max()), -b.body_min(), neg_cuts, opts)
                   .value +
               std::max(0.0, -b.body_max());
    if (const auto tail = b.lower_tail())
      negative += power_tail_integral(tail->coef, tail->exponent, -b.body_min(), kInf);
  }
  if (std::isinf(positive) && std::isinf(negative)) return std::numeric_limits<double>::quiet_NaN();
  return positive - negative;
}

Law Law::scaled(double factor) const {
  require(is_discrete(), ErrorCode::Precondition, "scaling is only defined for atom laws");
  require(factor > 0.0, ErrorCode::InvalidParameter, "scale factor must be positive");
  auto atoms = atoms_;
  for (auto& a : atoms) a.value *= factor;
  return discrete(std::move(atoms));
}

namespace {

class ShiftedLaw final : public ContinuousLaw {
 public:
  ShiftedLaw(std::shared_ptr<const ContinuousLaw> base, double offset)
      : base_(std::move(base)), offset_(offset) {}
  double survival(double x) const override { return base_->survival(x - offset_); }
  double cdf_below(double x) const override { return base_->cdf_below(x - offset_); }
  double quantile(double s) const override { return base_->quantile(s) + offset_; }
  double body_min() const override { return base_->body_min() + offset_; }
  double body_max() const override { return base_->body_max() + offset_; }
  bool all_moments_finite() const override { return base_->all_moments_finite(); }
  std::vector<double> breakpoints() const override {
    auto out = base_->breakpoints();
    out.push_back(base_->body_min());
    out.push_back(base_->body_max());
    for (double& x : out) x += offset_;
    return out;
  }

 private:
  std::shared_ptr<const ContinuousLaw> base_;
  double offset_;
};

}  // namespace

Law Law::shifted(double offset) const {
  if (!is_discrete()) {
    // A shifted power tail is no longer an exact power tail.
    require(!body_->upper_tail() && !body_->lower_tail(), ErrorCode::Precondition,
            "cannot shift a continuous law with power tails; supply the centered law");
    return continuous(std::make_shared<ShiftedLaw>(body_, offset), tag_);
  }
  auto atoms = atoms_;
  for (auto& a : atoms) a.value += offset;
  return discrete(std::move(atoms));
}

}  // namespace cptlab
