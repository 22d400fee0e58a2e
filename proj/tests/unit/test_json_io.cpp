#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cptlab/error.hpp"
#include "cptlab/json_io.hpp"
#include "cptlab/kernel.hpp"

using namespace cptlab;

TEST(Json, SpecRoundTrip) {
  const CptSpec spec(0.5, 0.8, 0.6, 0.7, Form::TverskyKahneman, 1.5, 2.25, -0.5);
  EXPECT_EQ(spec_from_json(spec_to_json(spec)), spec);
  const auto minimal = spec_from_json(R"({"alpha":0.5,"beta":0.8,"gamma":0.6,"delta":0.7})");
  EXPECT_EQ(minimal, CptSpec::power(0.5, 0.8, 0.6, 0.7));
}

TEST(Json, SyntaxErrorReportsLine) {
  try {
    spec_from_json("{\n  \"alpha\": 0.5,\n  \"beta\": ,\n}", "spec.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    EXPECT_NE(std::string(e.what()).find("spec.json:3:"), std::string::npos) << e.what();
  }
}

TEST(Json, SchemaErrors) {
  try {
    spec_from_json(R"({"alpha":0.5,"beta":0.8,"gamma":0.6})", "s.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    EXPECT_NE(std::string(e.what()).find("delta"), std::string::npos);
  }
  EXPECT_THROW(spec_from_json(R"({"alpha":"x","beta":0.8,"gamma":0.6,"delta":0.7})"), Error);
  EXPECT_THROW(spec_from_json(R"({"alpha":1.5,"beta":0.8,"gamma":0.6,"delta":0.7})"), Error);
}

TEST(Json, AtomLawRoundTrip) {
  const auto law = Law::discrete({{-1.0, 0.25, 0.5}, {2.0, 0.75, 0.5}});
  const auto back = law_from_json(law_to_json(law));
  ASSERT_TRUE(back.is_discrete());
  ASSERT_EQ(back.atoms().size(), 2u);
  EXPECT_EQ(back.atoms()[1].prob_p, 0.75);
  EXPECT_EQ(back.atoms()[0].prob_q, 0.5);
}

TEST(Json, QuantileLaw) {
  const auto law = law_from_json(R"({"kind":"quantile","grid":[[0,0],[0.5,2]],"tail":{"coef":1,"exp":1}})");
  EXPECT_FALSE(law.is_discrete());
  EXPECT_NEAR(law.body().survival(4.0), 0.25, 1e-15);
  const auto back = law_from_json(law_to_json(law));
  EXPECT_NEAR(back.body().survival(4.0), 0.25, 1e-15);
  EXPECT_THROW(law_from_json(R"({"kind":"spline"})"), Error);
  EXPECT_THROW(law_from_json(R"({"kind":"atoms","atoms":[[1,1]]})"), Error);
}

TEST(Json, Market) {
  const auto m = market_from_json(
      R"({"d":1,"k":2,"T":1,"grid":[0],"mu":[[0.06]],"sigma":[[[0.3,0.4]]],"s0":[100]})");
  EXPECT_EQ(m.k, 2);
  EXPECT_EQ(m.sigma[0][0][1], 0.4);
  const auto back = market_from_json(market_to_json(m));
  EXPECT_EQ(back.initial_prices, m.initial_prices);
  // Zero volatility parses but cannot be solved.
  const auto singular =
      market_from_json(R"({"d":1,"k":1,"T":1,"grid":[0],"mu":[[0.06]],"sigma":[[[0.0]]],"s0":[1]})");
  EXPECT_THROW(solve_market_price_of_risk(singular), Error);
  EXPECT_THROW(market_from_json(R"({"d":1,"k":1,"T":1,"grid":[0],"mu":[[0.06]],"sigma":[[[0.2]]],"s0":[-1]})"),
               Error);
}

TEST(Json, MissingFile) {
  try {
    load_spec("/nonexistent/spec.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

TEST(Csv, FullPrecision) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(26.5), "26.5");
  EXPECT_EQ(format_double(INFINITY), "inf");
  EXPECT_EQ(std::stod(format_double(M_PI)), M_PI);
  std::ostringstream out;
  CsvWriter csv(out);
  csv.header({"a", "b"});
  csv.field(1.0 / 3.0).field(7LL);
  csv.end_row();
  EXPECT_EQ(out.str(), "a,b\n0.33333333333333331,7\n");
}
