#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "moclab/errors.hpp"
#include "moclab/verifier.hpp"

namespace {

using namespace moclab;
constexpr double kPi = std::numbers::pi;

ScenarioSpec scenario(Theorem th, ManifoldModel m, InitialProfile u0, double horizon, std::vector<double> checkpoints,
                      std::size_t grid) {
  ScenarioSpec sc;
  sc.id = "t";
  sc.theorem = th;
  sc.manifold = m;
  sc.u0 = std::move(u0);
  sc.horizon = horizon;
  sc.checkpoints = std::move(checkpoints);
  sc.grid = grid;
  return sc;
}

void expect_consistent(const VerificationReport& r) {
  EXPECT_EQ(r.tolerance_budget, r.budget.total());
  if (r.status == Status::HypothesisNotMet) {
    EXPECT_FALSE(r.pass);
  } else {
    EXPECT_EQ(r.pass, r.max_violation <= r.tolerance_budget);
    EXPECT_EQ(r.status, r.pass ? Status::Pass : Status::Violation);
  }
}

TEST(Scenario, TermsRoundTrip) {
  const Term t = parse_term("0.25:sin:2:cos:1");
  EXPECT_EQ(t.amplitude, 0.25);
  EXPECT_EQ(t.fx, "sin");
  EXPECT_EQ(t.kx, 2.0);
  EXPECT_EQ(t.fy, "cos");
  EXPECT_EQ(t.ky, 1.0);
  const Term back = parse_term(format_term(t));
  EXPECT_EQ(back.amplitude, t.amplitude);
  EXPECT_EQ(back.fy, t.fy);
  EXPECT_THROW(parse_term("0.2:tan:1:one:0"), PreconditionError);
  EXPECT_THROW(parse_term("0.2:sin:1"), PreconditionError);
}

TEST(Scenario, InitialProfiles) {
  const auto torus = ManifoldModel::flat_torus(1, 1);
  const auto f = initial_function(torus, InitialProfile::from_terms({{0.2, "sin", 1, "one", 0}, {0.1, "one", 0, "cos", 1}}));
  EXPECT_NEAR(f({0.25, 0.0}), 0.3, 1e-15);
  const auto d = initial_function(ManifoldModel::interval(1, Boundary::DirichletDomain), InitialProfile::eigenfunction());
  EXPECT_NEAR(d({0.5}), 1.0, 1e-15);
  EXPECT_NEAR(d({1.0}), 0.0, 1e-15);
  const auto n = initial_function(ManifoldModel::interval(1, Boundary::NeumannDomain), InitialProfile::eigenfunction());
  EXPECT_NEAR(n({1.0}), -1.0, 1e-15);
  // Band-limited data: seeded, and the coefficients have the requested l1 norm.
  const auto b1 = initial_function(torus, InitialProfile::bandlimited(5, 2, 0.1));
  const auto b2 = initial_function(torus, InitialProfile::bandlimited(5, 2, 0.1));
  const auto b3 = initial_function(torus, InitialProfile::bandlimited(6, 2, 0.1));
  EXPECT_EQ(b1({0.3, 0.7}), b2({0.3, 0.7}));
  EXPECT_NE(b1({0.3, 0.7}), b3({0.3, 0.7}));
  double peak = 0.0;
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) peak = std::max(peak, std::fabs(b1({i / 50.0, j / 50.0})));
  }
  EXPECT_LE(peak, 0.1 + 1e-15);
}

TEST(Scenario, Validation) {
  auto sc = scenario(Theorem::Main, ManifoldModel::circle(1.0), InitialProfile::eigenfunction(), 0.5, {0.1, 0.5}, 32);
  EXPECT_NO_THROW(sc.validate());
  sc.checkpoints = {0.5, 0.1};
  EXPECT_THROW(sc.validate(), PreconditionError);
  sc.checkpoints = {0.0, 0.5};
  EXPECT_THROW(sc.validate(), PreconditionError);
  sc.checkpoints = {0.6};
  EXPECT_THROW(sc.validate(), PreconditionError);
  sc.checkpoints = {0.5};
  sc.horizon = 0.0;
  EXPECT_THROW(sc.validate(), PreconditionError);
  auto ricci = scenario(Theorem::RicciFlow, ManifoldModel::round_sphere(3), InitialProfile::eigenfunction(), 0.25, {0.25}, 32);
  EXPECT_THROW(ricci.validate(), PreconditionError);  // 1/(2(n-1)) = 0.25
  ricci.horizon = 0.2;
  ricci.checkpoints = {0.2};
  EXPECT_NO_THROW(ricci.validate());
  EXPECT_EQ(sc.times_with_start(), (std::vector<double>{0.0, 0.5}));
}

TEST(VerifyMain, SphereHeatEigenfunction) {
  auto sc = scenario(Theorem::Main, ManifoldModel::round_sphere(2), InitialProfile::eigenfunction(), 0.5, {0.1, 0.25, 0.5}, 200);
  const auto o = verify_main_estimate(sc);
  expect_consistent(o.report);
  EXPECT_TRUE(o.report.pass);
  EXPECT_LE(o.report.max_violation, -sc.epsilon / 2.0);
  ASSERT_EQ(o.report.checkpoints.size(), 4u);
  EXPECT_EQ(o.report.checkpoints.front().time, 0.0);
  for (const auto& row : o.comparison) EXPECT_LE(row.margin, -sc.epsilon / 2.0);
}

TEST(VerifyMain, TorusPLaplacian) {
  auto sc = scenario(Theorem::Main, ManifoldModel::flat_torus(1, 1),
                     InitialProfile::from_terms({{0.2, "sin", 1, "one", 0}, {0.1, "one", 0, "cos", 1}}), 0.05, {0.02, 0.05}, 32);
  sc.flow = FlowSpec::p_laplacian(3.0);
  const auto o = verify_main_estimate(sc);
  expect_consistent(o.report);
  EXPECT_TRUE(o.report.pass) << o.report.max_violation << " > " << o.report.tolerance_budget;
}

TEST(VerifyEveryTheorem, ConstantDataPasses) {
  const auto flat = InitialProfile::constant(0.4);
  std::vector<ScenarioSpec> all{
      scenario(Theorem::Main, ManifoldModel::flat_torus(1, 1), flat, 0.05, {0.05}, 32),
      scenario(Theorem::RicciFlow, ManifoldModel::round_sphere(2), flat, 0.2, {0.2}, 40),
      scenario(Theorem::Neumann, ManifoldModel::rectangle(1, 1, Boundary::NeumannDomain), flat, 0.05, {0.05}, 32),
      scenario(Theorem::HeightBound, ManifoldModel::flat_torus(1, 1), flat, 0.05, {0.05}, 32),
  };
  for (const auto& sc : all) {
    const auto o = verify(sc);
    expect_consistent(o.report);
    EXPECT_TRUE(o.report.pass) << to_string(sc.theorem);
    for (const auto& w : o.raw) {
      for (double v : w.values) EXPECT_EQ(v, 0.0);
    }
  }
  auto dir = scenario(Theorem::Dirichlet, ManifoldModel::interval(1, Boundary::DirichletDomain), InitialProfile::constant(0.0),
                      0.05, {0.05}, 21);
  dir.phi.slope = 0.0;
  const auto o = verify(dir);
  expect_consistent(o.report);
  EXPECT_TRUE(o.report.pass);
}

TEST(VerifyRicci, ShrinkingSphere) {
  auto sc = scenario(Theorem::RicciFlow, ManifoldModel::round_sphere(2), InitialProfile::eigenfunction(), 0.25, {0.1, 0.25}, 200);
  const auto o = verify_ricci_flow(sc);
  expect_consistent(o.report);
  EXPECT_TRUE(o.report.pass);
  for (const auto& w : o.raw) {
    const double lambda = 1.0 - 2.0 * w.time;
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w.nonempty[j]) EXPECT_NEAR(w.values[j], lambda * std::sin(w.bin_centers[j] / std::sqrt(lambda)), 5e-3);
    }
  }
  sc.horizon = 0.5;
  sc.checkpoints = {0.5};
  EXPECT_THROW(verify_ricci_flow(sc), PreconditionError);
}

TEST(VerifyHeight, TorusSine) {
  auto sc = scenario(Theorem::HeightBound, ManifoldModel::flat_torus(1, 1), InitialProfile::from_terms({{0.3, "sin", 1, "one", 0}}),
                     0.5, {0.1, 0.3, 0.5}, 32);
  const auto o = verify_height_bound(sc);
  expect_consistent(o.report);
  EXPECT_TRUE(o.report.pass);
  EXPECT_LE(o.report.max_violation, 1e-3);
  EXPECT_GT(o.report.metrics.at("range_margin"), 0.0);
  // The profile slope is at least (1 + delta_g) times the steepest discrete gradient.
  const double h = 1.0 / 32.0;
  const double grad = 0.6 * kPi * std::sin(2.0 * kPi * h) / (2.0 * kPi * h);
  EXPECT_NEAR(o.report.metrics.at("max_discrete_gradient"), grad, 1e-12);
  EXPECT_GE(o.report.metrics.at("G"), 1.05 * grad);
}

TEST(VerifyHeight, CircleSine) {
  auto sc = scenario(Theorem::HeightBound, ManifoldModel::circle(2.0 * kPi), InitialProfile::eigenfunction(), 1.0, {0.5, 1.0}, 128);
  const auto o = verify_height_bound(sc);
  expect_consistent(o.report);
  EXPECT_TRUE(o.report.pass);
  // sin x is saturating: phi0 = -1.05 cos z and Psi(u(y)) - Psi(u(x)) stays just below d.
  EXPECT_NEAR(o.report.metrics.at("profile_amplitude"), 1.05, 1e-12);
  EXPECT_GT(o.report.metrics.at("range_margin"), 0.0);
}

TEST(VerifyHeight, TooSmallGIsAHypothesisFailure) {
  auto sc = scenario(Theorem::HeightBound, ManifoldModel::circle(2.0 * kPi), InitialProfile::eigenfunction(), 0.5, {0.5}, 128);
  sc.delta_g = 0.0;
  sc.u0 = InitialProfile::from_terms({{1.0, "sin", 1, "one", 0}, {0.3, "sin", 3, "one", 0}});
  // delta_g = 0 leaves no slack at the steepest pair; discrete data may or may not
  // satisfy the initial inequality, but a failure must never be a violation.
  const auto o = verify_height_bound(sc);
  expect_consistent(o.report);
  EXPECT_NE(o.report.status, Status::Violation);
}

TEST(VerifyBakry, ZeroPotentialMatchesMainEstimate) {
  auto sc = scenario(Theorem::BakryEmery, ManifoldModel::circle(2.0 * kPi), InitialProfile::eigenfunction(), 0.5, {0.1, 0.5}, 128);
  sc.flow.drift = cosine_potential(0.0, 2.0 * kPi);
  const auto be = verify_bakry_emery(sc);
  auto main = sc;
  main.theorem = Theorem::Main;
  main.flow.drift.reset();
  const auto me = verify_main_estimate(main);
  EXPECT_EQ(be.report.metrics.at("bakry_emery_a"), 0.0);
  EXPECT_NEAR(be.report.max_violation, me.report.max_violation, 1e-12);
  ASSERT_EQ(be.report.checkpoints.size(), me.report.checkpoints.size());
  for (std::size_t k = 0; k < be.report.checkpoints.size(); ++k) {
    EXPECT_NEAR(be.report.checkpoints[k].max_margin, me.report.checkpoints[k].max_margin, 1e-12);
  }
}

TEST(VerifyBakry, CosinePotential) {
  auto sc = scenario(Theorem::BakryEmery, ManifoldModel::circle(2.0 * kPi), InitialProfile::eigenfunction(), 0.5, {0.1, 0.5}, 128);
  sc.flow.drift = cosine_potential(1.0, 2.0 * kPi);
  const auto o = verify_bakry_emery(sc);
  expect_consistent(o.report);
  EXPECT_TRUE(o.report.pass);
  EXPECT_NEAR(o.report.metrics.at("bakry_emery_a"), -1.0, 1e-12);
  EXPECT_LE(o.report.metrics.at("weighted_mean_drift_per_time"), 1e-6);
}

TEST(VerifyBakry, TorusMcfWithDrift) {
  auto sc = scenario(Theorem::BakryEmery, ManifoldModel::flat_torus(1, 1), InitialProfile::bandlimited(4, 2, 0.1), 0.05, {0.02, 0.05}, 32);
  sc.flow = FlowSpec::graphical_mcf();
  sc.flow.drift = cosine_potential(0.1, 1.0);
  const auto o = verify_bakry_emery(sc);
  expect_consistent(o.report);
  EXPECT_TRUE(o.report.pass);
}

TEST(VerifyNeumann, IntervalEigenfunction) {
  auto sc = scenario(Theorem::Neumann, ManifoldModel::interval(1, Boundary::NeumannDomain), InitialProfile::eigenfunction(), 0.3,
                     {0.05, 0.1, 0.3}, 200);
  const auto o = verify_neumann(sc);
  expect_consistent(o.report);
  EXPECT_TRUE(o.report.pass);
  for (const auto& w : o.raw) {
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w.nonempty[j]) EXPECT_NEAR(w.values[j], std::exp(-kPi * kPi * w.time) * std::sin(kPi * w.bin_centers[j]), 5e-3);
    }
  }
}

TEST(VerifyNeumann, RectangleMcf) {
  auto sc = scenario(Theorem::Neumann, ManifoldModel::rectangle(1, 1, Boundary::NeumannDomain),
                     InitialProfile::from_terms({{0.25, "cos", 1, "cos", 1}}), 0.1, {0.05, 0.1}, 24);
  sc.flow = FlowSpec::graphical_mcf();
  const auto o = verify_neumann(sc);
  expect_consistent(o.report);
  EXPECT_TRUE(o.report.pass);
}

TEST(VerifyDirichlet, LipschitzBoundPersists) {
  auto sc = scenario(Theorem::Dirichlet, ManifoldModel::interval(1, Boundary::DirichletDomain), InitialProfile::eigenfunction(), 0.1,
                     {0.02, 0.1}, 101);
  Supersolution phi;
  phi.slope = kPi;
  const auto o = verify_dirichlet(sc, phi);
  expect_consistent(o.report);
  EXPECT_TRUE(o.report.pass);
  EXPECT_GE(-o.report.max_violation, -1e-6);
}

TEST(VerifyDirichlet, RectanglePLaplacian) {
  auto sc = scenario(Theorem::Dirichlet, ManifoldModel::rectangle(1, 1, Boundary::DirichletDomain),
                     InitialProfile::from_terms({{0.2, "sin", 1, "sin", 1}}), 0.05, {0.05}, 25);
  sc.flow = FlowSpec::p_laplacian(3.0);
  Supersolution phi;
  phi.slope = 0.2 * kPi;
  const auto o = verify_dirichlet(sc, phi);
  expect_consistent(o.report);
  EXPECT_TRUE(o.report.pass);
}

TEST(VerifyDirichlet, BrokenHypothesesAreNotViolations) {
  auto sc = scenario(Theorem::Dirichlet, ManifoldModel::interval(1, Boundary::DirichletDomain), InitialProfile::eigenfunction(), 0.1,
                     {0.1}, 101);
  Supersolution convex;
  convex.kind = "power";
  convex.coefficient = 10.0;
  convex.exponent = 2.0;
  auto o = verify_dirichlet(sc, convex);
  EXPECT_EQ(o.report.status, Status::HypothesisNotMet);
  EXPECT_FALSE(o.report.pass);
  Supersolution low;
  low.slope = 1.0;  // below the initial modulus
  o = verify_dirichlet(sc, low);
  EXPECT_EQ(o.report.status, Status::HypothesisNotMet);
  Supersolution decreasing;
  decreasing.slope = -1.0;
  EXPECT_EQ(verify_dirichlet(sc, decreasing).report.status, Status::HypothesisNotMet);
}

TEST(AlphaAdmissible, Presets) {
  for (const auto& [flow, exact] : std::vector<std::pair<FlowSpec, bool>>{
           {FlowSpec::heat(), true}, {FlowSpec::graphical_mcf(), true}, {FlowSpec::p_laplacian(3.0), false},
           {FlowSpec::p_laplacian(4.0), false}}) {
    const auto alpha = [&](double r, double t) { return flow.alpha(r, 0.0, t); };
    const auto res = alpha_admissible(isotropic_matrix(flow, 3), alpha, 10000, 7);
    EXPECT_TRUE(res.pass);
    // v parallel to p is probed every time, so the minimum ratio is 1 up to the
    // cancellation in v^T A v at large R.
    EXPECT_GE(res.worst_ratio, 1.0 - 1e-9);
    if (exact) EXPECT_NEAR(res.worst_ratio, 1.0, 1e-9);
  }
}

TEST(AlphaAdmissible, MonotoneInAlpha) {
  const auto flow = FlowSpec::graphical_mcf();
  const auto a = isotropic_matrix(flow, 2);
  auto scaled = [&](double c) { return [&flow, c](double r, double t) { return c * flow.alpha(r, 0.0, t); }; };
  EXPECT_TRUE(alpha_admissible(a, scaled(1.0), 2000, 3, 2).pass);
  EXPECT_TRUE(alpha_admissible(a, scaled(0.5), 2000, 3, 2).pass);
  const auto too_big = alpha_admissible(a, scaled(1.1), 2000, 3, 2);
  EXPECT_FALSE(too_big.pass);
  EXPECT_GT(too_big.max_defect, 0.0);
}

TEST(AlphaAdmissible, ScenarioReport) {
  ScenarioSpec sc;
  sc.id = "alpha";
  sc.theorem = Theorem::AlphaAdmissible;
  sc.flow = FlowSpec::p_laplacian(3.0);
  sc.samples = 500;
  const auto o = verify(sc);
  expect_consistent(o.report);
  EXPECT_TRUE(o.report.pass);
  EXPECT_EQ(o.report.budget.floor, kAdmissibilityTolerance);
}

double sphere_margin(std::size_t grid) {
  auto sc = scenario(Theorem::Main, ManifoldModel::round_sphere(2), InitialProfile::eigenfunction(), 0.25, {0.1, 0.25}, grid);
  const auto r = verify_main_estimate(sc).report;
  EXPECT_TRUE(r.pass) << grid;
  return r.max_violation;
}

TEST(VerifyProperty, RefinementKeepsPassing) {
  // Halving h also halves dt (CFL) and the bin width (aligned bins).
  sphere_margin(64);
  sphere_margin(128);
  sphere_margin(256);
}

}  // namespace
