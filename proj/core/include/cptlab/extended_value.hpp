#pragma once

#include <limits>
#include <string>

namespace cptlab {

/// Result of a Choquet integral that may legitimately be +infinity.
///
/// `PosInfinite` is only produced from an analytic tail argument (the
/// integrand decays no faster than 1/y); numerics alone never certify
/// infinity. A finite estimate sitting close to that boundary is reported as
/// `DivergenceSuspected` together with the tail exponent used as evidence.
class ExtendedValue {
 public:
  enum class Kind { Finite, PosInfinite, DivergenceSuspected };

  static ExtendedValue finite(double value) { return {Kind::Finite, value, 0.0, {}}; }

  static ExtendedValue infinite(double tail_exponent, std::string reason) {
    return {Kind::PosInfinite, std::numeric_limits<double>::infinity(), tail_exponent,
            std::move(reason)};
  }

  static ExtendedValue suspected(double estimate, double tail_exponent) {
    return {Kind::DivergenceSuspected, estimate, tail_exponent,
            "tail exponent close to the integrability boundary"};
  }

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::Finite; }
  bool is_infinite() const noexcept { return kind_ == Kind::PosInfinite; }
  bool is_suspected() const noexcept { return kind_ == Kind::DivergenceSuspected; }

  /// Finite value; for a suspected divergence this is the (finite) estimate,
  /// which is a lower bound on the true integral.
  double value() const noexcept { return value_; }
  double lower_bound() const noexcept { return value_; }
  double tail_exponent() const noexcept { return tail_exponent_; }
  const std::string& reason() const noexcept { return reason_; }

  /// Estimate usable in arithmetic: +inf for certified divergence.
  double as_double() const noexcept { return value_; }

 private:
  ExtendedValue(Kind kind, double value, double tail_exponent, std::string reason)
      : kind_(kind), value_(value), tail_exponent_(tail_exponent), reason_(std::move(reason)) {}

  Kind kind_;
  double value_;
  double tail_exponent_;
  std::string reason_;
};

const char* to_string(ExtendedValue::Kind kind) noexcept;

}  // namespace cptlab
