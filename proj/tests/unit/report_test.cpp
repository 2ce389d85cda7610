#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "moclab/errors.hpp"
#include "moclab/report.hpp"

namespace {

using namespace moclab;

VerificationReport sample_report() {
  VerificationReport r;
  r.scenario_id = "sample";
  r.theorem = Theorem::Neumann;
  r.max_violation = -0.0123456789012345678;
  r.budget = {1e-3, 1.25, 0.1 / 3.0, 1.25, 1.0 / 64.0, 1.25, 1e-5, 0.0};
  r.checkpoints = {{0.0, -5e-4, 0.1, 10, 1.0}, {0.1, -INFINITY, 0.0, 0, 0.0}};
  r.provenance.seed = 42;
  r.provenance.grid_x = 64;
  r.provenance.pairs = 123456789012ULL;
  r.provenance.pairs_exhaustive = false;
  r.metrics["spot_test_max_residual"] = std::numeric_limits<double>::infinity();
  r.metrics["lipschitz_initial_envelope"] = 1.25;
  r.notes = {"first", "quote \" and comma ,"};
  r.finalize();
  return r;
}

TEST(Report, RoundTripIsLossless) {
  const VerificationReport r = sample_report();
  const VerificationReport back = report_from_json(nlohmann::ordered_json::parse(serialize_report(r)));
  EXPECT_EQ(back, r);
  EXPECT_EQ(serialize_report(back), serialize_report(r));
}

TEST(Report, NonFiniteValuesAreStrings) {
  const auto j = report_to_json(sample_report());
  const std::string text = j.dump();
  EXPECT_NE(text.find("\"-inf\""), std::string::npos);
  EXPECT_NE(text.find("\"inf\""), std::string::npos);
  VerificationReport r = sample_report();
  r.metrics["x"] = std::nan("");
  const auto back = report_from_json(nlohmann::ordered_json::parse(serialize_report(r)));
  EXPECT_TRUE(std::isnan(back.metrics.at("x")));
}

TEST(Report, SerializationEndsWithNewline) {
  const std::string s = serialize_report(sample_report());
  ASSERT_FALSE(s.empty());
  EXPECT_EQ(s.back(), '\n');
}

TEST(Report, PassIsRecomputableFromTwoNumbers) {
  const auto j = nlohmann::ordered_json::parse(serialize_report(sample_report()));
  const auto back = report_from_json(j);
  EXPECT_EQ(back.pass, back.max_violation <= back.tolerance_budget);
  EXPECT_EQ(back.tolerance_budget, back.budget.total());
}

TEST(Report, MalformedInputIsRejected) {
  auto j = report_to_json(sample_report());
  j.erase("max_violation");
  EXPECT_THROW(report_from_json(j), PreconditionError);
  j = report_to_json(sample_report());
  j["theorem"] = "mainestimate";
  EXPECT_THROW(report_from_json(j), PreconditionError);
  j = report_to_json(sample_report());
  j["max_violation"] = "soon";
  EXPECT_THROW(report_from_json(j), PreconditionError);
}

TEST(ReportProperty, RandomReportsRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> e(-300, 300);
  for (int trial = 0; trial < 300; ++trial) {
    VerificationReport r;
    r.scenario_id = "r" + std::to_string(trial);
    r.theorem = static_cast<Theorem>(trial % 7);
    r.max_violation = std::ldexp(u(rng), e(rng) / 10);
    r.budget.epsilon = std::fabs(u(rng)) * 1e-3;
    r.budget.c1 = std::fabs(u(rng));
    r.budget.delta_bin = std::fabs(u(rng)) * 1e-2;
    r.budget.floor = trial % 3 == 0 ? 1e-6 : 0.0;
    for (int k = 0; k < trial % 5; ++k) r.checkpoints.push_back({0.1 * k, u(rng), u(rng), std::size_t(k), u(rng)});
    r.metrics["m"] = std::ldexp(u(rng), e(rng));
    if (trial % 4 == 0) r.status = Status::HypothesisNotMet;
    r.finalize();
    EXPECT_EQ(report_from_json(nlohmann::ordered_json::parse(serialize_report(r))), r);
  }
}

}  // namespace
