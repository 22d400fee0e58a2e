#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cptlab/law.hpp"

namespace cptlab {

/// Diffusion market with piecewise-constant coefficients on a time grid.
/// Cell c spans [grid[c], grid[c+1]]; mu[c] has d entries, sigma[c] is d x k.
struct MarketSpec {
  int d = 1;
  int k = 1;
  double horizon = 1.0;
  std::vector<double> grid;
  std::vector<std::vector<double>> mu;
  std::vector<std::vector<std::vector<double>>> sigma;
  std::vector<double> initial_prices;

  /// Checks dimensions, positivity and grid ordering; throws InvalidParameter.
  void validate() const;
  /// Cell boundaries with the horizon appended when the grid stops short.
  std::vector<double> cell_edges() const;
};

/// Log-normal pricing kernel rho_T = dQ/dP with total variance v.
///
/// U = F^Q_rho(rho_T) = Phi((ln rho - v/2) / sqrt v); under P its CDF is
/// G_P(u) = Phi(Phi^-1(u) + sqrt v). v = 0 is allowed and means Q = P.
class KernelModel {
 public:
  struct Cell {
    double t0 = 0.0, t1 = 0.0;
    std::vector<double> theta;                   // least-norm solution, k entries
    std::vector<double> theta_bar;               // rotated solution, d entries
    std::vector<std::vector<double>> sigma_bar;  // d x d rotated volatility
    double residual = 0.0;                       // max |sigma theta + mu|
    double variance = 0.0;                       // |theta|^2 dt
  };

  /// Model from the variance pair directly; split_variance in (0, v) or 0 to
  /// use v / 2.
  static KernelModel from_variance(double v, double split_variance = 0.0);

  double total_variance() const noexcept { return v_; }
  double split_time() const noexcept { return t_hat_; }
  double split_variance() const noexcept { return v_hat_; }
  bool degenerate() const noexcept { return v_ == 0.0; }
  const std::vector<Cell>& cells() const noexcept { return cells_; }

  /// Kernel value at quantile level u of U.
  double rho_at(double u) const;
  /// G_P(u) = P{U <= u}.
  double cdf_p(double u) const;
  /// P{U > u} computed from w = 1 - u without cancellation.
  double upper_p(double w) const;
  /// P-mass of {u0 < U <= u1}.
  double mass_p(double u0, double u1) const;
  /// E_P[rho^r] = exp(r (r - 1) v / 2).
  double moment_p(double r) const;

 private:
  friend KernelModel solve_market_price_of_risk(const MarketSpec& market);
  double v_ = 0.0;
  double v_hat_ = 0.0;
  double t_hat_ = 0.0;
  std::vector<Cell> cells_;
};

/// Solves sigma theta = -mu per cell (least-norm when k > d) and assembles
/// the total variance and split time.
KernelModel solve_market_price_of_risk(const MarketSpec& market);

/// Tabulated law of rho_T under the requested measure on an odd grid of
/// normal scores, with locally fitted upper tail and all moments finite.
Law kernel_law(const KernelModel& model, Measure measure, int grid_size = 2001);

struct JointSample {
  double rho = 0.0;
  double u = 0.0;
  double u_star = 0.0;
};

/// Draws (rho_T, U, U*) under the requested measure. Deterministic for a seed;
/// fixed-size chunks use independent streams and are merged in chunk order.
std::vector<JointSample> sample_joint(const KernelModel& model, Measure measure, std::size_t n,
                                      std::uint64_t seed);

struct AssumptionCheck {
  std::string name;
  bool passed = false;
  double expected = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  bool all_passed() const;
};

/// Continuity of F^Q_rho, moments E_P[rho^p] and E_P[rho^-p] for p in
/// {1, 2, 4, 8} (closed form vs quadrature), and the budget identity
/// E_Q[x0 / rho] = x0 (closed form and Monte Carlo within 3 standard errors).
AssumptionReport verify_assumptions(const KernelModel& model, double x0 = 1.0,
                                    std::size_t mc_samples = 100000, std::uint64_t seed = 7);

}  // namespace cptlab
