#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "cptlab/error.hpp"
#include "cptlab/kernel.hpp"
#include "cptlab/normal.hpp"

using namespace cptlab;

namespace {

MarketSpec scalar_market(double mu, double sigma) {
  MarketSpec m;
  m.d = m.k = 1;
  m.horizon = 1.0;
  m.grid = {0.0};
  m.mu = {{mu}};
  m.sigma = {{{sigma}}};
  m.initial_prices = {1.0};
  return m;
}

}  // namespace

TEST(Market, ScalarExample) {
  const auto model = solve_market_price_of_risk(scalar_market(0.08, 0.2));
  ASSERT_EQ(model.cells().size(), 1u);
  EXPECT_NEAR(model.cells()[0].theta[0], -0.4, 1e-15);
  EXPECT_NEAR(model.total_variance(), 0.16, 1e-15);
  EXPECT_GT(model.split_time(), 0.0);
  EXPECT_LT(model.split_variance(), model.total_variance());
}

TEST(Market, IdentityExample) {
  MarketSpec m;
  m.d = m.k = 2;
  m.grid = {0.0};
  m.mu = {{0.1, -0.05}};
  m.sigma = {{{1.0, 0.0}, {0.0, 1.0}}};
  m.initial_prices = {1.0, 1.0};
  const auto model = solve_market_price_of_risk(m);
  EXPECT_NEAR(model.cells()[0].theta[0], -0.1, 1e-15);
  EXPECT_NEAR(model.cells()[0].theta[1], 0.05, 1e-15);
  EXPECT_NEAR(model.total_variance(), 0.0125, 1e-15);
}

TEST(Market, IncompleteLeastNorm) {
  MarketSpec m;
  m.d = 1;
  m.k = 2;
  m.grid = {0.0};
  m.mu = {{0.06}};
  m.sigma = {{{0.3, 0.4}}};
  m.initial_prices = {1.0};
  const auto model = solve_market_price_of_risk(m);
  const auto& c = model.cells()[0];
  EXPECT_NEAR(std::abs(c.sigma_bar[0][0]), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(c.theta_bar[0]), 0.12, 1e-15);
  // Least-norm theta = -sigma^T (sigma sigma^T)^-1 mu = -(0.3, 0.4) * 0.06 / 0.25.
  EXPECT_NEAR(c.theta[0], -0.072, 1e-15);
  EXPECT_NEAR(c.theta[1], -0.096, 1e-15);
  EXPECT_NEAR(model.total_variance(), 0.0144, 1e-15);
  EXPECT_LT(c.residual, 1e-12);
}

TEST(Market, PiecewiseAdditivityAndSplit) {
  MarketSpec m;
  m.d = m.k = 1;
  m.horizon = 2.0;
  m.grid = {0.0, 0.5, 1.5};
  m.mu = {{0.08}, {0.0}, {0.03}};
  m.sigma = {{{0.2}}, {{0.25}}, {{0.1}}};
  m.initial_prices = {1.0};
  const auto model = solve_market_price_of_risk(m);
  double v = 0.0;
  for (const auto& c : model.cells()) v += c.variance;
  EXPECT_NEAR(model.total_variance(), 0.16 * 0.5 + 0.0 + 0.09 * 0.5, 1e-15);
  EXPECT_EQ(model.total_variance(), v);
  EXPECT_EQ(model.split_time(), 0.5);
  EXPECT_NEAR(model.split_variance(), 0.08, 1e-15);
}

TEST(Market, Errors) {
  EXPECT_THROW(solve_market_price_of_risk(scalar_market(0.08, 0.0)), Error);
  MarketSpec bad = scalar_market(0.08, 0.2);
  bad.k = 0;
  EXPECT_THROW(bad.validate(), Error);
  MarketSpec flat = scalar_market(0.0, 0.2);
  const auto model = solve_market_price_of_risk(flat);
  EXPECT_TRUE(model.degenerate());
  EXPECT_THROW(kernel_law(model, Measure::P), Error);
}

TEST(Kernel, LawMedians) {
  const auto model = KernelModel::from_variance(0.16);
  EXPECT_NEAR(kernel_law(model, Measure::P).body().quantile(0.5), 0.923116346386635782910759849572, 1e-12);
  EXPECT_NEAR(kernel_law(model, Measure::Q).body().quantile(0.5), std::exp(0.08), 1e-12);
  // Linear interpolation of a convex quantile biases the mean up, at second order.
  const double coarse = kernel_law(model, Measure::P).mean(Measure::P) - 1.0;
  const double fine = kernel_law(model, Measure::P, 4001).mean(Measure::P) - 1.0;
  EXPECT_GT(coarse, 0.0);
  EXPECT_LT(coarse, 1e-5);
  EXPECT_NEAR(coarse / fine, 4.0, 0.2);
}

TEST(Kernel, ClosedForms) {
  const auto model = KernelModel::from_variance(0.16);
  EXPECT_NEAR(model.moment_p(2.0), 1.17351087099181023501861108689, 1e-14);
  EXPECT_EQ(model.moment_p(1.0), 1.0);
  EXPECT_EQ(model.moment_p(0.0), 1.0);
  EXPECT_NEAR(model.cdf_p(0.3), 0.450499083710029924396138729212, 1e-15);
  EXPECT_NEAR(model.upper_p(0.5), 0.344578258389675833263119323978, 1e-15);
  EXPECT_NEAR(model.mass_p(0.2, 0.7), model.cdf_p(0.7) - model.cdf_p(0.2), 1e-15);
  EXPECT_NEAR(model.rho_at(0.5), std::exp(0.08), 1e-15);
}

TEST(Kernel, DegenerateIsIdentity) {
  const auto model = KernelModel::from_variance(0.0);
  EXPECT_EQ(model.cdf_p(0.3), 0.3);
  EXPECT_EQ(model.mass_p(0.25, 0.5), 0.25);
}

TEST(Kernel, SamplingDeterministic) {
  const auto model = KernelModel::from_variance(0.16);
  const auto a = sample_joint(model, Measure::Q, 10000, 5);
  const auto b = sample_joint(model, Measure::Q, 10000, 5);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].rho, b[i].rho);
    EXPECT_EQ(a[i].u_star, b[i].u_star);
  }
  const auto c = sample_joint(model, Measure::Q, 10000, 6);
  EXPECT_NE(a[0].rho, c[0].rho);
}

TEST(Kernel, ChangeOfMeasureDuality) {
  // E_P[rho h(U)] = E_Q[h(U)] for the bounded test payoff h = 1{U < 0.3} + 2 U.
  const auto model = KernelModel::from_variance(0.16);
  const auto draws = sample_joint(model, Measure::P, 100000, 9);
  auto h = [](double u) { return (u < 0.3 ? 1.0 : 0.0) + 2.0 * u; };
  double s = 0.0, s2 = 0.0;
  for (const auto& d : draws) {
    const double x = d.rho * h(d.u);
    s += x;
    s2 += x * x;
  }
  const double n = static_cast<double>(draws.size());
  const double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
  EXPECT_LT(std::abs(mean - 1.3), 3.0 * se);
}

TEST(Kernel, UMatchesRho) {
  const auto model = KernelModel::from_variance(0.25);
  for (const auto& d : sample_joint(model, Measure::Q, 1000, 3))
    EXPECT_NEAR(d.u, normal::cdf((std::log(d.rho) - 0.125) / 0.5), 1e-14);
}

TEST(Kernel, Assumptions) {
  const auto report = verify_assumptions(KernelModel::from_variance(0.16), 10.0);
  EXPECT_TRUE(report.all_passed());
  EXPECT_GE(report.checks.size(), 10u);
}
