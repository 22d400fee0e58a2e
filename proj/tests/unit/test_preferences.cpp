#include <gtest/gtest.h>

#include <cmath>

#include "cptlab/error.hpp"
#include "cptlab/preferences.hpp"

using namespace cptlab;

TEST(Preferences, UtilityExamples) {
  EXPECT_DOUBLE_EQ(utility_plus(CptSpec::power(0.5, 0.8, 0.6, 0.7), 4.0), 2.0);
  EXPECT_DOUBLE_EQ(utility_plus(CptSpec::power(1.0, 0.8, 0.6, 0.7), 7.3), 7.3);
  // 10^0.88 to 30 digits
  EXPECT_NEAR(utility_plus(CptSpec::power(0.88, 0.9, 0.6, 0.7), 10.0), 7.58577575029183768753766746662,
              1e-14);
}

TEST(Preferences, DistortionExamples) {
  EXPECT_DOUBLE_EQ(distortion_plus(CptSpec::power(0.5, 0.8, 0.5, 0.7), 0.25), 0.5);
  for (Form f : {Form::PurePower, Form::TverskyKahneman}) {
    const CptSpec s(0.5, 0.8, 1.0, 1.0, f);
    EXPECT_NEAR(distortion_plus(s, 0.37), 0.37, 1e-15);
    EXPECT_NEAR(distortion_minus(s, 0.37), 0.37, 1e-15);
  }
  const CptSpec tk(0.88, 0.88, 0.61, 0.69, Form::TverskyKahneman);
  EXPECT_NEAR(distortion_plus(tk, 0.1), 0.186302566377174150511752411145, 1e-15);
}

TEST(Preferences, EndpointsBothForms) {
  for (Form f : {Form::PurePower, Form::TverskyKahneman}) {
    const CptSpec s(0.3, 0.7, 0.4, 0.6, f);
    EXPECT_EQ(utility_plus(s, 0.0), 0.0);
    EXPECT_EQ(utility_minus(s, 0.0), 0.0);
    EXPECT_EQ(distortion_plus(s, 0.0), 0.0);
    EXPECT_EQ(distortion_minus(s, 0.0), 0.0);
    EXPECT_EQ(distortion_plus(s, 1.0), 1.0);
    EXPECT_EQ(distortion_minus(s, 1.0), 1.0);
  }
}

TEST(Preferences, TkTinyProbabilityIsFinite) {
  const double w = tk_distortion(1e-300, 0.3);
  EXPECT_TRUE(std::isfinite(w));
  EXPECT_GT(w, 0.0);
  EXPECT_NEAR(std::log(w), 0.3 * std::log(1e-300), 1e-9 * 207.0);
}

TEST(Preferences, MonotoneUtility) {
  const CptSpec s(0.4, 0.9, 0.5, 0.6, Form::TverskyKahneman, 2.0, 2.25);
  double prev_p = -1.0, prev_m = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = i * 0.037;
    const double up = utility_plus(s, x), um = utility_minus(s, x);
    EXPECT_GT(up, prev_p);
    EXPECT_GT(um, prev_m);
    prev_p = up;
    prev_m = um;
  }
}

TEST(Preferences, PowerDistortionDominatesIdentity) {
  const auto s = CptSpec::power(0.5, 0.8, 0.6, 0.7);
  for (int i = 1; i < 100; ++i) EXPECT_GE(distortion_plus(s, i / 100.0), i / 100.0);
}

TEST(Preferences, StrictValidation) {
  EXPECT_THROW(CptSpec::power(0.0, 0.5, 0.5, 0.5), Error);
  EXPECT_THROW(CptSpec::power(0.5, 1.01, 0.5, 0.5), Error);
  EXPECT_THROW(CptSpec(0.5, 0.5, 0.5, 0.5, Form::TverskyKahneman, -1.0), Error);
  EXPECT_THROW(CptSpec(0.5, 0.5, 0.5, 0.5, Form::PurePower, 2.0), Error);
  const auto s = CptSpec::power(0.5, 0.8, 0.6, 0.7);
  EXPECT_THROW(utility_plus(s, -1.0), Error);
  EXPECT_THROW(distortion_plus(s, 1.5), Error);
  EXPECT_THROW(distortion_minus(s, -0.1), Error);
}

TEST(Preferences, FormNames) {
  EXPECT_EQ(to_string(Form::PurePower), "power");
  EXPECT_EQ(to_string(Form::TverskyKahneman), "tk");
  EXPECT_EQ(form_from_string("tk"), Form::TverskyKahneman);
  EXPECT_THROW(form_from_string("cubic"), Error);
}

TEST(Preferences, CenteredDropsReferencePoint) {
  const CptSpec s(0.5, 0.8, 0.6, 0.7, Form::TverskyKahneman, 1.0, 2.0, 3.5);
  EXPECT_EQ(s.centered().reference_point(), 0.0);
  EXPECT_EQ(s.centered().c_minus(), 2.0);
}
