#pragma once

#include <cmath>
#include <memory>

#include "cptlab/law.hpp"

namespace cptlab::fixtures {

// P{X > x} = x^-kappa for x >= 1, tabulated exactly: body [1, top], tail beyond.
class ExactPareto final : public ContinuousLaw {
 public:
  ExactPareto(double kappa, double top = 10.0) : kappa_(kappa), top_(top) {}
  double survival(double x) const override { return x < 1.0 ? 1.0 : std::pow(x, -kappa_); }
  double cdf_below(double x) const override { return 1.0 - survival(x); }
  double quantile(double s) const override { return std::pow(1.0 - s, -1.0 / kappa_); }
  double body_min() const override { return 1.0; }
  double body_max() const override { return top_; }
  std::optional<PowerTail> upper_tail() const override { return PowerTail{1.0, kappa_}; }
  double truncated_mean(double a) const override {
    if (a <= 1.0) return a;
    if (kappa_ == 1.0) return 1.0 + std::log(a);
    return 1.0 + (1.0 - std::pow(a, 1.0 - kappa_)) / (kappa_ - 1.0);
  }

 private:
  double kappa_;
  double top_;
};

inline Law exact_pareto(double kappa) {
  return Law::continuous(std::make_shared<ExactPareto>(kappa), Measure::P);
}

}  // namespace cptlab::fixtures
