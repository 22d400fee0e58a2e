#include <gtest/gtest.h>

#include <cmath>

#include "cptlab/normal.hpp"
#include "cptlab/quadrature.hpp"

using namespace cptlab;

TEST(Normal, KnownValues) {
  EXPECT_NEAR(normal::cdf(1.0), 0.841344746068542948585232545632, 1e-16);
  EXPECT_NEAR(normal::quantile(0.975), 1.95996398454005423552459443052, 1e-14);
  EXPECT_NEAR(normal::quantile_upper(0.025), 1.95996398454005423552459443052, 1e-14);
  EXPECT_EQ(normal::cdf(0.0), 0.5);
  EXPECT_TRUE(std::isinf(normal::quantile(0.0)));
  EXPECT_GT(normal::sf(30.0), 0.0);
}

TEST(Normal, QuantileInvertsCdf) {
  // Each direction is checked where its probability is small, since a
  // probability near one has already lost the digits.
  for (double x = -37.0; x <= 0.0; x += 0.25) {
    EXPECT_NEAR(normal::quantile(normal::cdf(x)), x, 1e-9 * (1.0 + std::abs(x)));
    EXPECT_NEAR(normal::quantile_upper(normal::sf(-x)), -x, 1e-9 * (1.0 + std::abs(x)));
  }
}

TEST(Quadrature, Polynomial) {
  const auto r = quad::integrate([](double x) { return x * x; }, 0.0, 3.0);
  EXPECT_NEAR(r.value, 9.0, 1e-13);
  EXPECT_TRUE(r.converged);
}

TEST(Quadrature, EndpointSingularity) {
  const auto r = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {1e-13, 1e-13, 4000});
  EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(Quadrature, Breakpoints) {
  const double bp[] = {0.3};
  const auto r = quad::integrate([](double x) { return x < 0.3 ? 1.0 : 0.0; }, 0.0, 1.0, bp);
  EXPECT_NEAR(r.value, 0.3, 1e-14);
}

TEST(Quadrature, HalfLine) {
  const auto r = quad::integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  const auto p = quad::integrate_to_infinity([](double x) { return std::pow(x, -2.5); }, 1.0);
  EXPECT_NEAR(p.value, 1.0 / 1.5, 1e-10);
}
