#include <gtest/gtest.h>

#include <cmath>

#include "cptlab/error.hpp"
#include "cptlab/law.hpp"

using namespace cptlab;

TEST(Law, DiscreteSortsAndMerges) {
  const auto law = Law::discrete({{3.0, 0.25, 0.5}, {-1.0, 0.5, 0.25}, {3.0, 0.25, 0.25}});
  ASSERT_EQ(law.atoms().size(), 2u);
  EXPECT_EQ(law.atoms()[0].value, -1.0);
  EXPECT_EQ(law.atoms()[1].value, 3.0);
  EXPECT_DOUBLE_EQ(law.atoms()[1].prob_p, 0.5);
  EXPECT_DOUBLE_EQ(law.atoms()[1].prob_q, 0.75);
  EXPECT_DOUBLE_EQ(law.mean(Measure::P), 1.0);
  EXPECT_DOUBLE_EQ(law.mean(Measure::Q), 2.0);
  EXPECT_FALSE(law.nonnegative());
}

TEST(Law, DiscreteValidation) {
  EXPECT_THROW(Law::discrete({}), Error);
  EXPECT_THROW(Law::discrete({{1.0, 0.5, 0.5}}), Error);
  EXPECT_THROW(Law::discrete({{1.0, 1.5, 1.0}}), Error);
  EXPECT_THROW(Law::discrete({{NAN, 1.0, 1.0}}), Error);
  EXPECT_NO_THROW(Law::discrete({{1.0, 0.3, 0.6}, {2.0, 0.7 + 5e-13, 0.4}}));
}

TEST(Law, ScaledAndShifted) {
  const auto law = Law::discrete({{1.0, 0.5, 0.5}, {2.0, 0.5, 0.5}});
  EXPECT_DOUBLE_EQ(law.scaled(3.0).atoms()[1].value, 6.0);
  EXPECT_DOUBLE_EQ(law.shifted(-1.5).atoms()[0].value, -0.5);
  EXPECT_THROW(law.scaled(0.0), Error);
}

TEST(Law, QuantileGridUniform) {
  const auto law = Law::quantile_grid({{0.0, 0.0}, {1.0, 2.0}}, std::nullopt);
  const auto& body = law.body();
  EXPECT_DOUBLE_EQ(body.survival(0.5), 0.75);
  EXPECT_DOUBLE_EQ(body.cdf_below(0.5), 0.25);
  EXPECT_DOUBLE_EQ(body.quantile(0.3), 0.6);
  EXPECT_NEAR(body.truncated_mean(1.0), 0.75, 1e-15);
  EXPECT_NEAR(law.mean(), 1.0, 1e-12);
  EXPECT_TRUE(law.nonnegative());
}

TEST(Law, QuantileGridAtomAndGap) {
  // Atom at 1 with mass 0.5 and a gap between 1 and 3.
  const auto law = Law::quantile_grid({{0.0, 1.0}, {0.5, 1.0}, {0.5, 3.0}, {1.0, 4.0}}, std::nullopt);
  const auto& body = law.body();
  EXPECT_DOUBLE_EQ(body.survival(1.0), 0.5);
  EXPECT_DOUBLE_EQ(body.cdf_below(1.0), 0.0);
  EXPECT_DOUBLE_EQ(body.survival(2.0), 0.5);
  EXPECT_NEAR(law.mean(), 0.5 * 1.0 + 0.5 * 3.5, 1e-12);
}

TEST(Law, ParetoTailTruncatedMean) {
  // P{X > x} = 1/x beyond x = 2 (level 1/2); body uniform on [0, 2] with mass 1/2.
  const auto law = Law::quantile_grid({{0.0, 0.0}, {0.5, 2.0}}, PowerTail{1.0, 1.0});
  const auto& body = law.body();
  EXPECT_NEAR(body.survival(4.0), 0.25, 1e-15);
  EXPECT_NEAR(body.tail_mismatch(), 0.0, 1e-15);
  // E[X ^ a] = int_0^a P{X > x} dx = 1.5 + ln(a / 2) for a >= 2.
  EXPECT_NEAR(body.truncated_mean(10.0), 1.5 + std::log(5.0), 1e-13);
}

TEST(Law, QuantileGridValidation) {
  EXPECT_THROW(Law::quantile_grid({}, std::nullopt), Error);
  EXPECT_THROW(Law::quantile_grid({{0.0, 1.0}, {1.0, 0.5}}, std::nullopt), Error);
  EXPECT_THROW(Law::quantile_grid({{0.0, 1.0}, {0.9, 2.0}}, std::nullopt), Error);
  EXPECT_THROW(Law::quantile_grid({{0.0, 1.0}, {1.0, 2.0}}, PowerTail{1.0, 1.0}), Error);
  EXPECT_THROW(Law::quantile_grid({{0.0, 1.0}, {0.5, 2.0}}, PowerTail{-1.0, 1.0}), Error);
}

TEST(Law, ShiftRefusesTails) {
  const auto tailed = Law::quantile_grid({{0.0, 0.0}, {0.5, 2.0}}, PowerTail{1.0, 1.0});
  EXPECT_THROW(tailed.shifted(1.0), Error);
  const auto plain = Law::quantile_grid({{0.0, 0.0}, {1.0, 2.0}}, std::nullopt);
  const auto moved = plain.shifted(-1.0);
  EXPECT_NEAR(moved.body().survival(0.0), 0.5, 1e-15);
  EXPECT_NEAR(moved.mean(), 0.0, 1e-12);
}

TEST(Law, MeasureTagIsEnforced) {
  const auto law = Law::quantile_grid({{0.0, 0.0}, {1.0, 2.0}}, std::nullopt, std::nullopt, Measure::Q);
  EXPECT_EQ(law.measure_tag(), Measure::Q);
  EXPECT_THROW(law.mean(Measure::P), Error);
}
