#include <gtest/gtest.h>

#include <cmath>

#include "cptlab/error.hpp"
#include "cptlab/normal.hpp"
#include "cptlab/witness.hpp"

using namespace cptlab;

namespace {

using K = PayoffSegment::Kind;

// C_n = E_Q[min(U^(-1/xi), n) 1{U < 1/2}] by direct antiderivative.
double c_n(double xi, double n) {
  const double un = std::pow(n, -xi);
  if (un >= 0.5) return 0.5 * n;
  const double e = 1.0 - 1.0 / xi;
  return n * un + (std::pow(0.5, e) - std::pow(un, e)) / e;
}

}  // namespace

TEST(Witness, ConstructionOneExample) {
  const auto report = witness_alpha_ge_beta(CptSpec::power(0.9, 0.5, 1.0, 1.0), KernelModel::from_variance(0.0),
                                            0.0, {0, 1, 100});
  ASSERT_EQ(report.rows.size(), 3u);
  EXPECT_EQ(report.rows[0].numeric, 0.0);
  EXPECT_NEAR(report.rows[2].numeric, 26.5478672240096624717180068311, 1e-10);
  EXPECT_NEAR(report.rows[2].closed_form, 26.5478672240096624717180068311, 1e-10);
  EXPECT_EQ(report.n0, 0);
}

TEST(Witness, ConstructionOneClosedFormWithBudget) {
  const auto spec = CptSpec::power(0.8, 0.6, 0.7, 0.9);
  for (double v : {0.0, 0.04, 0.16}) {
    const auto model = KernelModel::from_variance(v);
    const double pa = 0.5 * std::erfc(std::sqrt(v) / std::sqrt(2.0));  // P{U >= 1/2}
    for (double x0 : {0.0, 0.75, 3.0}) {
      const auto report = witness_alpha_ge_beta(spec, model, x0, {1, 7, 50, 400});
      const double n0 = std::ceil(2.0 * x0);
      EXPECT_EQ(report.n0, static_cast<std::int64_t>(n0));
      EXPECT_NEAR(report.prob_a, pa, 1e-15);
      for (const auto& row : report.rows) {
        const double big = n0 + static_cast<double>(row.n);
        const double expected =
            std::pow(big, 0.8) * std::pow(pa, 0.7) - std::pow(big - 2.0 * x0, 0.6) * std::pow(1.0 - pa, 0.9);
        EXPECT_NEAR(row.numeric, expected, 1e-12 * std::abs(expected));
        EXPECT_LT(row.budget_residual, 1e-12);
      }
    }
  }
}

TEST(Witness, EqualExponentsUseCheapEvent) {
  const auto spec = CptSpec::power(0.7, 0.7, 0.6, 0.8);
  const auto report = witness_alpha_ge_beta(spec, KernelModel::from_variance(0.16), 0.0, {10, 100, 1000});
  EXPECT_GT(report.rows[2].numeric, report.rows[1].numeric);
  EXPECT_GT(report.rows[1].numeric, report.rows[0].numeric);
  for (const auto& row : report.rows) EXPECT_NEAR(row.numeric, row.closed_form, 1e-9 * std::abs(row.closed_form));
}

TEST(Witness, PreconditionOutsideRegime) {
  const auto model = KernelModel::from_variance(0.16);
  EXPECT_THROW(witness_alpha_ge_beta(CptSpec::power(0.5, 0.8, 0.6, 0.7), model, 0.0, {1}), Error);
  EXPECT_THROW(witness_beta_delta(CptSpec::power(0.5, 0.8, 0.6, 0.7), model, {1}), Error);
  EXPECT_THROW(witness_alpha_gamma(CptSpec::power(0.5, 0.8, 0.6, 0.7), model, {1}), Error);
}

TEST(Witness, Constants) {
  const auto bd = witness_constants(WitnessCause::BetaDeltaBelowOne, CptSpec::power(0.95, 0.6, 1.0, 0.8));
  EXPECT_DOUBLE_EQ(bd.chi, 0.5 * (0.6 / 0.8 + 1.0));
  EXPECT_DOUBLE_EQ(bd.xi, 0.5 * 0.95);
  const auto ag = witness_constants(WitnessCause::AlphaGammaAboveOne, CptSpec::power(0.9, 1.0, 0.2, 0.5));
  EXPECT_DOUBLE_EQ(ag.xi, 2.75);
}

TEST(Witness, ConstructionTwoBudgetAndAgreement) {
  const auto spec = CptSpec::power(0.95, 0.96, 1.0, 1.0);
  for (double v : {0.0, 0.04, 0.16}) {
    const auto report = witness_beta_delta(spec, KernelModel::from_variance(v), {1, 10, 100, 1000, 10000});
    EXPECT_TRUE(report.loss_side_certified);
    for (const auto& row : report.rows) {
      EXPECT_LT(row.budget_residual, 1e-8);
      EXPECT_NEAR(row.numeric, row.closed_form, 1e-6 * std::max(1.0, std::abs(row.closed_form)));
      EXPECT_GT(row.truncation_level, 0.0);
    }
    EXPECT_GT(report.rows.back().numeric, report.rows.front().numeric);
  }
}

TEST(Witness, ConstructionTwoMonotoneBeyondOnset) {
  const auto spec = CptSpec::power(0.95, 0.96, 1.0, 1.0);
  std::vector<std::int64_t> idx;
  for (std::int64_t n = 100; n <= 140; ++n) idx.push_back(n);
  const auto report = witness_beta_delta(spec, KernelModel::from_variance(0.04), idx);
  for (std::size_t i = 1; i < report.rows.size(); ++i)
    EXPECT_GT(report.rows[i].numeric, report.rows[i - 1].numeric);
}

TEST(Witness, ConstructionTwoLossTailHasInfiniteMean) {
  const double chi = 0.5 * (0.96 / 1.0 + 1.0);
  const auto z = Law::quantile_grid({{0.0, 0.0}, {0.5, 0.0}, {0.5, std::pow(2.0, 1.0 / chi)}},
                                    PowerTail{1.0, chi}, std::nullopt, Measure::Q);
  EXPECT_TRUE(expectation(z, Measure::Q).is_infinite());
}

TEST(Witness, ConstructionThreeClosedForms) {
  const auto spec = CptSpec::power(0.9, 1.0, 0.2, 0.5);
  const double xi = 2.75;
  EXPECT_NEAR(c_n(xi, 1e300), 1.01095099129312497820495056353, 1e-12);
  for (double v : {0.0, 0.04, 0.16}) {
    const auto model = KernelModel::from_variance(v);
    const auto report = witness_alpha_gamma(spec, model, {1, 5, 50, 500});
    const double pa = model.upper_p(0.5);
    for (const auto& row : report.rows) {
      const double cn = c_n(xi, static_cast<double>(row.n));
      EXPECT_NEAR(row.losses, std::pow(2.0 * cn, 1.0) * std::pow(pa, 0.5), 1e-10);
      EXPECT_LT(row.budget_residual, 1e-8);
      EXPECT_NEAR(row.numeric, row.closed_form, 1e-6 * std::max(1.0, std::abs(row.closed_form)));
    }
    const auto x1 = payoff_law(witness_payoff(WitnessCause::AlphaGammaAboveOne, spec, 1), model);
    EXPECT_GE(x1.support_min(), -2.0 * c_n(xi, 1.0) - 1e-12);
  }
}

TEST(Witness, DispatchAndNames) {
  EXPECT_STREQ(to_string(WitnessCause::AlphaGeBeta), "a_ge_b");
  EXPECT_EQ(witness_cause_from_string("bd_lt_1"), WitnessCause::BetaDeltaBelowOne);
  EXPECT_EQ(witness_cause_for(Cause::AlphaGammaAboveOne), WitnessCause::AlphaGammaAboveOne);
  EXPECT_THROW(witness_cause_for(Cause::SufficientHolds), Error);
  EXPECT_THROW(witness_cause_from_string("other"), Error);
}

TEST(UPayoff, Validation) {
  EXPECT_THROW(UPayoff({{K::Constant, Level::from_u(0.1), Level::from_w(0.0), 1.0, 0.0}}), Error);
  EXPECT_THROW(UPayoff({{K::Constant, Level::from_u(0.0), Level::from_u(0.5), 1.0, 0.0},
                        {K::Constant, Level::from_u(0.5), Level::from_w(0.0), 2.0, 0.0}}),
               Error);
}

TEST(UPayoff, StepPayoffMatchesAtoms) {
  const auto model = KernelModel::from_variance(0.16);
  const auto spec = CptSpec::power(0.6, 0.8, 0.7, 0.9);
  const UPayoff f({{K::Constant, Level::from_u(0.0), Level::from_u(0.5), 2.0, 0.0},
                   {K::Constant, Level::from_u(0.5), Level::from_w(0.0), -1.0, 0.0}});
  EXPECT_DOUBLE_EQ(f.mean_q(), 0.5);
  const auto atoms = Law::discrete({{2.0, model.cdf_p(0.5), 0.5}, {-1.0, model.upper_p(0.5), 0.5}});
  const double expected = cpt_value(atoms, spec).value();
  EXPECT_NEAR(cpt_value(payoff_law(f, model), spec).value(), expected, 1e-10);
  const auto parts = payoff_value_by_levels(f, model, spec);
  EXPECT_NEAR(parts.gains.value() - parts.losses.value(), expected, 1e-10);
}

TEST(UPayoff, PowerSegmentsLevelsVsEngine) {
  const auto model = KernelModel::from_variance(0.04);
  const auto spec = CptSpec::power(0.5, 0.9, 0.6, 0.8);
  const UPayoff f({{K::Constant, Level::from_u(0.0), Level::from_u(1e-4), std::pow(1e-4, -0.5), 0.0},
                   {K::LowPower, Level::from_u(1e-4), Level::from_u(0.5), 1.0, 0.5},
                   {K::HighPower, Level::from_u(0.5), Level::from_w(1e-3), 1.0, 0.7},
                   {K::Constant, Level::from_w(1e-3), Level::from_w(0.0), -std::pow(1e-3, -0.7), 0.0}});
  const auto levels = payoff_value_by_levels(f, model, spec);
  const auto engine = cpt_parts(payoff_law(f, model), spec);
  EXPECT_NEAR(levels.gains.value(), engine.gains.value(), 1e-8);
  EXPECT_NEAR(levels.losses.value(), engine.losses.value(), 1e-8);
}
