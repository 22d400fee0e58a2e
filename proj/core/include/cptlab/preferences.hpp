#pragma once

#include <string_view>

namespace cptlab {

enum class Form { PurePower, TverskyKahneman };

std::string_view to_string(Form form) noexcept;
Form form_from_string(std::string_view text);

/// One side (gains or losses) of a CPT preference: u(x) = scale * x^exponent
/// composed with a distortion w of the given exponent.
///
/// Exponents are only required to be positive here; the (0, 1] restriction
/// belongs to CptSpec. The inequality audits reuse this type with exponents
/// above one.
struct PreferenceSide {
  double utility_exponent = 1.0;
  double distortion_exponent = 1.0;
  double scale = 1.0;
  Form form = Form::PurePower;

  static PreferenceSide power(double utility_exponent, double distortion_exponent);

  double utility(double x) const;
  double inverse_utility(double y) const;
  double distortion(double p) const;
};

/// Preference quadruple (alpha, beta, gamma, delta) with functional form,
/// scales and reference point. Validated at construction, never clamped.
class CptSpec {
 public:
  CptSpec(double alpha, double beta, double gamma, double delta, Form form = Form::PurePower,
          double c_plus = 1.0, double c_minus = 1.0, double reference_point = 0.0);

  static CptSpec power(double alpha, double beta, double gamma, double delta) {
    return CptSpec(alpha, beta, gamma, delta);
  }

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }
  double delta() const noexcept { return delta_; }
  Form form() const noexcept { return form_; }
  double c_plus() const noexcept { return c_plus_; }
  double c_minus() const noexcept { return c_minus_; }
  double reference_point() const noexcept { return reference_point_; }

  PreferenceSide gains() const noexcept { return {alpha_, gamma_, c_plus_, form_}; }
  PreferenceSide losses() const noexcept { return {beta_, delta_, c_minus_, form_}; }

  /// Same preferences with the reference point moved to zero.
  CptSpec centered() const;

  friend bool operator==(const CptSpec&, const CptSpec&) = default;

 private:
  double alpha_, beta_, gamma_, delta_;
  Form form_;
  double c_plus_, c_minus_;
  double reference_point_;
};

double utility_plus(const CptSpec& spec, double x);
double utility_minus(const CptSpec& spec, double x);
double distortion_plus(const CptSpec& spec, double p);
double distortion_minus(const CptSpec& spec, double p);

/// Tversky-Kahneman weighting p^g / (p^g + (1-p)^g)^(1/g), evaluated in log
/// space. Exact at p = 0 and p = 1.
double tk_distortion(double p, double exponent);

}  // namespace cptlab
