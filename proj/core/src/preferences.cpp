#include "cptlab/preferences.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cptlab/error.hpp"

namespace cptlab {

std::string_view to_string(Form form) noexcept {
  return form == Form::PurePower ? "power" : "tk";
}

Form form_from_string(std::string_view text) {
  if (text == "power" || text == "PurePower") return Form::PurePower;
  if (text == "tk" || text == "TverskyKahneman") return Form::TverskyKahneman;
  fail(ErrorCode::InvalidParameter, "unknown functional form '" + std::string(text) +
                                        "' (expected \"power\" or \"tk\")");
}

PreferenceSide PreferenceSide::power(double utility_exponent, double distortion_exponent) {
  require(utility_exponent > 0.0 && std::isfinite(utility_exponent), ErrorCode::InvalidParameter,
          "utility exponent must be positive and finite");
  require(distortion_exponent > 0.0 && std::isfinite(distortion_exponent),
          ErrorCode::InvalidParameter, "distortion exponent must be positive and finite");
  return {utility_exponent, distortion_exponent, 1.0, Form::PurePower};
}

double PreferenceSide::utility(double x) const {
  if (!(x >= 0.0)) fail(ErrorCode::Domain, "utility evaluated at negative wealth");
  if (x == 0.0) return 0.0;
  if (utility_exponent == 1.0) return scale * x;
  return scale * std::pow(x, utility_exponent);
}

double PreferenceSide::inverse_utility(double y) const {
  if (!(y >= 0.0)) fail(ErrorCode::Domain, "inverse utility evaluated at a negative level");
  if (y == 0.0) return 0.0;
  const double scaled = y / scale;
  if (utility_exponent == 1.0) return scaled;
  return std::pow(scaled, 1.0 / utility_exponent);
}

double tk_distortion(double p, double exponent) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  if (exponent == 1.0) return p;
  const double a = exponent * std::log(p);
  const double b = exponent * std::log1p(-p);
  const double hi = std::max(a, b);
  const double log_sum = hi + std::log(std::exp(a - hi) + std::exp(b - hi));
  return std::exp(a - log_sum / exponent);
}

double PreferenceSide::distortion(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::Domain, "distortion evaluated outside [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  if (form == Form::TverskyKahneman) return tk_distortion(p, distortion_exponent);
  if (distortion_exponent == 1.0) return p;
  return std::pow(p, distortion_exponent);
}

namespace {

void check_exponent(double value, const char* name) {
  require(value > 0.0 && value <= 1.0, ErrorCode::InvalidParameter,
          std::string(name) + " must lie in (0, 1], got " + std::to_string(value));
}

}  // namespace

CptSpec::CptSpec(double alpha, double beta, double gamma, double delta, Form form,
                 double c_plus, double c_minus, double reference_point)
    : alpha_(alpha),
      beta_(beta),
      gamma_(gamma),
      delta_(delta),
      form_(form),
      c_plus_(c_plus),
      c_minus_(c_minus),
      reference_point_(reference_point) {
  check_exponent(alpha, "alpha");
  check_exponent(beta, "beta");
  check_exponent(gamma, "gamma");
  check_exponent(delta, "delta");
  require(c_plus > 0.0 && std::isfinite(c_plus), ErrorCode::InvalidParameter,
          "c_plus must be positive");
  require(c_minus > 0.0 && std::isfinite(c_minus), ErrorCode::InvalidParameter,
          "c_minus must be positive");
  require(std::isfinite(reference_point), ErrorCode::InvalidParameter,
          "reference_point must be finite");
  if (form == Form::PurePower) {
    require(c_plus == 1.0 && c_minus == 1.0, ErrorCode::InvalidParameter,
            "the pure power form has unit scales; use form \"tk\" for c_plus/c_minus");
  }
}

CptSpec CptSpec::centered() const {
  return CptSpec(alpha_, beta_, gamma_, delta_, form_, c_plus_, c_minus_, 0.0);
}

double utility_plus(const CptSpec& spec, double x) { return spec.gains().utility(x); }
double utility_minus(const CptSpec& spec, double x) { return spec.losses().utility(x); }
double distortion_plus(const CptSpec& spec, double p) { return spec.gains().distortion(p); }
double distortion_minus(const CptSpec& spec, double p) { return spec.losses().distortion(p); }

}  // namespace cptlab
