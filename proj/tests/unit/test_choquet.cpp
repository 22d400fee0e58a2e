#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cptlab/choquet.hpp"
#include "cptlab/error.hpp"
#include "support.hpp"

using namespace cptlab;

namespace {

Law two_point(double low, double high, double p_high) {
  return Law::discrete({{low, 1.0 - p_high, 1.0 - p_high}, {high, p_high, p_high}});
}

double riemann_plus(const Law& law, const CptSpec& spec, double h) {
  // Midpoint sum of w+(P{u+(X) > y}) over y.
  const auto atoms = law.atoms();
  const double top = utility_plus(spec, std::max(0.0, atoms.back().value));
  double sum = 0.0;
  for (double y = 0.5 * h; y < top; y += h) {
    double p = 0.0;
    for (const auto& a : atoms)
      if (a.value > 0.0 && utility_plus(spec, a.value) > y) p += a.prob_p;
    sum += distortion_plus(spec, std::min(1.0, p));
  }
  return sum * h;
}

}  // namespace

TEST(Choquet, ConstantIdentity) {
  const auto spec = CptSpec::power(0.5, 0.8, 0.8, 1.0);
  EXPECT_NEAR(choquet_plus(Law::constant(2.0), spec).value(), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(choquet_minus(Law::constant(3.0), spec).value(), std::pow(3.0, 0.8), 1e-15);
  EXPECT_EQ(cpt_value(Law::constant(0.0), spec).value(), 0.0);
  EXPECT_NEAR(cpt_value(Law::constant(-3.0), spec).value(), -std::pow(3.0, 0.8), 1e-15);
}

TEST(Choquet, TwoPointClosedForms) {
  const auto spec = CptSpec::power(0.5, 0.6, 0.8, 0.7);
  EXPECT_NEAR(choquet_plus(two_point(0.0, 4.0, 0.5), spec).value(), 1.14869835499703500679862694678, 1e-14);
  EXPECT_NEAR(choquet_minus(two_point(0.0, 4.0, 0.5), spec).value(), 1.41421356237309504880168872421, 1e-14);
}

TEST(Choquet, AlphaGeBetaExample) {
  const auto spec = CptSpec::power(0.9, 0.5, 1.0, 1.0);
  const auto law = Law::discrete({{-100.0, 0.5, 0.5}, {100.0, 0.5, 0.5}});
  EXPECT_NEAR(cpt_value(law, spec).value(), 26.5478672240096624717180068311, 1e-12);
}

TEST(Choquet, TelescopingMatchesRiemann) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<Atom> atoms;
    double sum = 0.0;
    for (int i = 0; i < 6; ++i) {
      const double p = u(rng) + 0.01;
      atoms.push_back({3.0 * u(rng), p, p});
      sum += p;
    }
    for (auto& a : atoms) a.prob_p = a.prob_q = a.prob_p / sum;
    const auto law = Law::discrete(atoms);
    const CptSpec spec(0.3 + 0.7 * u(rng), 1.0, 0.3 + 0.7 * u(rng), 1.0,
                       t % 2 ? Form::TverskyKahneman : Form::PurePower);
    EXPECT_NEAR(choquet_plus(law, spec).value(), riemann_plus(law, spec, 1e-4), 1e-4);
  }
}

TEST(Choquet, PositiveHomogeneity) {
  const auto spec = CptSpec::power(0.7, 0.9, 0.6, 0.8);
  const auto law = Law::discrete({{0.5, 0.2, 0.2}, {1.0, 0.3, 0.3}, {4.0, 0.5, 0.5}});
  const double base = choquet_plus(law, spec).value();
  for (double lambda : {0.1, 2.0, 37.0})
    EXPECT_NEAR(choquet_plus(law.scaled(lambda), spec).value(), std::pow(lambda, 0.7) * base, 1e-10);
}

TEST(Choquet, MonotoneInPayoff) {
  const auto spec = CptSpec::power(0.6, 0.8, 0.7, 0.75);
  const auto x = Law::discrete({{-1.0, 0.4, 0.4}, {0.5, 0.3, 0.3}, {2.0, 0.3, 0.3}});
  const auto y = Law::discrete({{-0.5, 0.4, 0.4}, {0.5, 0.3, 0.3}, {2.5, 0.3, 0.3}});
  EXPECT_LE(cpt_value(x, spec).value(), cpt_value(y, spec).value());
}

TEST(Choquet, UniformLawQuadrature) {
  // X ~ U(0,1): V+ = int_0^1 (1 - y^2)^0.7 dy for alpha = 0.5, gamma = 0.7.
  const auto law = Law::quantile_grid({{0.0, 0.0}, {1.0, 1.0}}, std::nullopt);
  const auto spec = CptSpec::power(0.5, 0.8, 0.7, 0.9);
  EXPECT_NEAR(choquet_plus(law, spec).value(), 0.73085704309936465362097967637, 1e-9);
}

TEST(Choquet, ParetoCertification) {
  // P{X > y} = y^-kappa: V+ is finite iff kappa gamma / alpha > 1.
  const double alpha = 0.5, gamma = 0.8;
  const auto spec = CptSpec::power(alpha, 0.9, gamma, 0.9);
  for (double kappa = 0.3; kappa <= 1.0; kappa += 0.025) {
    const auto v = choquet_plus(fixtures::exact_pareto(kappa), spec);
    const double e = kappa * gamma / alpha;
    if (e <= 1.0) {
      EXPECT_TRUE(v.is_infinite()) << kappa;
    } else {
      EXPECT_FALSE(v.is_infinite()) << kappa;
    }
  }
  const auto v = choquet_plus(fixtures::exact_pareto(1.5), spec);
  ASSERT_TRUE(v.is_finite());
  EXPECT_NEAR(v.value(), 1.71428571428571428571428571429, 1e-9);
  const auto near = choquet_plus(fixtures::exact_pareto(0.63), spec);
  EXPECT_TRUE(near.is_suspected());
  EXPECT_NEAR(near.tail_exponent(), 0.63 * gamma / alpha, 1e-12);
}

TEST(Choquet, UndefinedWhenLossesInfinite) {
  const auto spec = CptSpec::power(0.5, 0.5, 0.8, 0.8);
  const auto law = Law::quantile_grid({{0.1, -10.0}, {1.0, 0.0}}, std::nullopt, PowerTail{0.1 * std::sqrt(10.0), 0.5});
  EXPECT_THROW(
      {
        try {
          cpt_value(law, spec);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::UndefinedFunctional);
          throw;
        }
      },
      Error);
}

TEST(Choquet, ReferencePointShift) {
  const CptSpec spec(0.5, 0.8, 1.0, 1.0, Form::PurePower, 1.0, 1.0, 1.0);
  EXPECT_NEAR(cpt_value(Law::constant(5.0), spec).value(), 2.0, 1e-15);
  EXPECT_NEAR(cpt_value(Law::constant(1.0), spec).value(), 0.0, 1e-15);
}

TEST(Choquet, NegativeSupportRejected) {
  const auto spec = CptSpec::power(0.5, 0.8, 0.6, 0.7);
  EXPECT_THROW(choquet_plus(Law::constant(-1.0), spec), Error);
}

TEST(Choquet, InconsistentTailRejected) {
  const auto spec = CptSpec::power(0.5, 0.8, 0.6, 0.7);
  const auto law = Law::quantile_grid({{0.0, 0.0}, {0.5, 2.0}}, PowerTail{3.0, 1.0});
  EXPECT_THROW(choquet_plus(law, spec), Error);
}

TEST(TruncationLevel, Examples) {
  EXPECT_DOUBLE_EQ(truncation_level(Law::constant(5.0), 5.0), 5.0);
  EXPECT_EQ(truncation_level(Law::constant(5.0), 0.0), 0.0);
  EXPECT_NEAR(truncation_level(fixtures::exact_pareto(1.0), 3.0), std::exp(2.0), 1e-9);
  EXPECT_THROW(truncation_level(Law::constant(5.0), 6.0), Error);
}

TEST(TruncationLevel, TabulatedParetoTail) {
  const auto law = Law::quantile_grid({{0.0, 0.0}, {0.5, 2.0}}, PowerTail{1.0, 1.0});
  const double a = truncation_level(law, 3.0);
  EXPECT_NEAR(1.5 + std::log(a / 2.0), 3.0, 1e-10);
}

TEST(TruncationLevel, FlatRegionGivesSmallestRoot) {
  const auto law = Law::discrete({{1.0, 0.5, 0.5}, {3.0, 0.5, 0.5}});
  // E[X ^ a] = 2 for every a >= 3.
  EXPECT_NEAR(truncation_level(law, 2.0), 3.0, 1e-10);
  EXPECT_NEAR(truncation_level(law, 1.0), 1.0, 1e-10);
  EXPECT_NEAR(truncation_level(law, 1.5), 2.0, 1e-10);
}

TEST(Expectation, CertifiesInfiniteMean) {
  EXPECT_TRUE(expectation(fixtures::exact_pareto(1.0)).is_infinite());
  EXPECT_NEAR(expectation(fixtures::exact_pareto(2.0)).value(), 2.0, 1e-9);
}
