#pragma once

#include <functional>
#include <span>

namespace cptlab::quad {

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (7/15) on [a, b]. Endpoints are never evaluated,
/// so integrable endpoint singularities are tolerated.
Result integrate(const Integrand& f, double a, double b, const Options& options = {});

/// Same, split at the given interior breakpoints (unsorted, duplicates and
/// points outside (a, b) are ignored).
Result integrate(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                 const Options& options = {});

/// Integral over [a, +inf) via the substitution x = a + t / (1 - t).
Result integrate_to_infinity(const Integrand& f, double a, const Options& options = {});

}  // namespace cptlab::quad
