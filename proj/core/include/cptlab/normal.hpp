#pragma once

namespace cptlab::normal {

double cdf(double x);
/// Phi(-x), accurate in the upper tail.
double sf(double x);
double pdf(double x);
/// Phi^{-1}(p) for p in (0, 1); returns -inf / +inf at the endpoints.
double quantile(double p);
/// Phi^{-1}(1 - q) computed from q directly.
double quantile_upper(double q);

}  // namespace cptlab::normal
