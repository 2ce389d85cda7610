#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "moclab/comparison.hpp"
#include "moclab/errors.hpp"

namespace {

using namespace moclab;
constexpr double kPi = std::numbers::pi;

ModulusCurve curve(const std::vector<double>& s, const std::vector<double>& v, double t = 0.0) {
  ModulusCurve c;
  c.bin_centers = s;
  c.values = v;
  c.nonempty.assign(s.size(), true);
  c.time = t;
  return increasing_envelope(c);
}

ComparisonProfile profile(double s_max, std::size_t cells, double eps, const Drift& drift,
                          const std::function<double(double)>& phi0) {
  ComparisonProfile p;
  p.s_grid = make_s_grid(s_max, cells);
  p.h = s_max / cells;
  p.left_bc = eps;
  p.epsilon_lift = eps;
  p.drift = drift;
  for (double s : p.s_grid) p.initial.push_back(phi0(s));
  return p;
}

double max_error(const ComparisonProfile& p, std::size_t k, const std::function<double(double)>& exact) {
  double e = 0.0;
  for (std::size_t j = 0; j < p.s_grid.size(); ++j) e = std::max(e, std::fabs(p.values_by_time[k][j] - exact(p.s_grid[j])));
  return e;
}

TEST(SupersolutionInitial, ZeroModulusGivesConstantLift) {
  const auto s = make_s_grid(1.0, 10);
  const auto w = curve({0.25, 0.5, 0.75}, {0.0, 0.0, 0.0});
  for (double v : build_supersolution_initial(w, 0.01, s)) EXPECT_EQ(v, 0.01);
}

TEST(SupersolutionInitial, InterpolatesSine) {
  std::vector<double> bins, vals;
  for (int j = 0; j < 50; ++j) {
    bins.push_back((j + 0.5) * (kPi / 2.0) / 50.0);
    vals.push_back(std::sin(bins.back()));
  }
  const auto s = make_s_grid(kPi / 2.0, 173);
  const auto phi = build_supersolution_initial(curve(bins, vals), 1e-3, s);
  const double h = (kPi / 2.0) / 50.0;
  for (std::size_t j = 0; j < s.size(); ++j) EXPECT_NEAR(phi[j], std::sin(s[j]) + 1e-3, h * h);  // Lip' h^2 / 8 < h^2
}

TEST(SupersolutionInitial, HeldConstantPastLastNonemptyBin) {
  ModulusCurve w = curve({0.1, 0.2, 0.3}, {0.1, 0.2, 0.3});
  w.nonempty[2] = false;
  const auto phi = build_supersolution_initial(w, 0.5, {0.05, 0.25, 0.3, 0.9});
  EXPECT_DOUBLE_EQ(phi[0], 0.55);
  EXPECT_DOUBLE_EQ(phi[2], 0.7);
  EXPECT_DOUBLE_EQ(phi[3], 0.7);
}

TEST(SupersolutionInitial, Preconditions) {
  const auto s = make_s_grid(1.0, 4);
  const auto w = curve({0.5}, {0.5});
  EXPECT_THROW(build_supersolution_initial(w, 0.0, s), PreconditionError);
  EXPECT_THROW(build_supersolution_initial(w, -1.0, s), PreconditionError);
  ModulusCurve raw = w;
  raw.envelope_applied = false;
  EXPECT_THROW(build_supersolution_initial(raw, 0.1, s), PreconditionError);
  ModulusCurve empty = w;
  empty.nonempty[0] = false;
  EXPECT_THROW(build_supersolution_initial(empty, 0.1, s), EmptyBinsError);
}

TEST(SolveComparison, ConstantIsStationaryForEveryDrift) {
  const double eps = 0.02;
  for (const Drift& d : {Drift::none(), Drift::c_kappa(1.0, 3), Drift::c_kappa(-1.0, 2), Drift::bakry_emery(-1.0),
                         Drift::bakry_emery(2.0), Drift::ricci_rescaled(2)}) {
    for (const FlowSpec& f : {FlowSpec::heat(), FlowSpec::graphical_mcf()}) {
      const auto p = solve_comparison(profile(kPi / 2.0, 64, eps, d, [&](double) { return eps; }), f, 0.2, {0.1, 0.2});
      for (const auto& v : p.values_by_time) {
        for (double x : v) EXPECT_EQ(x, eps) << to_string(d.kind);
      }
    }
  }
}

TEST(SolveComparison, NoDriftEigenDecay) {
  const double eps = 1e-3, s_max = 1.5;
  const double k = kPi / (2.0 * s_max);
  const auto p = solve_comparison(profile(s_max, 200, eps, Drift::none(), [&](double s) { return eps + std::sin(k * s); }),
                                  FlowSpec::heat(), 0.5, {0.25, 0.5});
  for (std::size_t i = 0; i < 2; ++i) {
    const double t = p.times[i];
    EXPECT_LE(max_error(p, i, [&](double s) { return eps + std::exp(-k * k * t) * std::sin(k * s); }), 1e-3);
  }
}

TEST(SolveComparison, CKappaEigenDecay) {
  const double eps = 1e-3;
  auto p0 = profile(kPi / 2.0, 200, eps, Drift::c_kappa(1.0, 2), [&](double s) { return eps + std::sin(s); });
  EXPECT_EQ(make_comparison_profile(curve({0.5, 1.0}, {0.5, 0.8}), eps, kPi / 2.0, 8, Drift::c_kappa(1.0, 2)).right_bc,
            RightBoundary::PoleGuarded);
  const auto p = solve_comparison(p0, FlowSpec::heat(), 0.5, {0.1, 0.5});
  for (std::size_t i = 0; i < 2; ++i) {
    const double t = p.times[i];
    EXPECT_LE(max_error(p, i, [&](double s) { return eps + std::exp(-2.0 * t) * std::sin(s); }), 1e-3);
  }
}

TEST(SolveComparison, BakryEmeryHermiteMode) {
  // 3s - s^3 solves w'' - s w' = -3 w with w(0) = 0 and w'(1) = 0.
  const double eps = 1e-3;
  auto mode = [](double s) { return 3.0 * s - s * s * s; };
  const auto p = solve_comparison(profile(1.0, 200, eps, Drift::bakry_emery(1.0), [&](double s) { return eps + mode(s); }),
                                  FlowSpec::heat(), 0.3, {0.1, 0.3});
  for (std::size_t i = 0; i < 2; ++i) {
    const double t = p.times[i];
    EXPECT_LE(max_error(p, i, [&](double s) { return eps + std::exp(-3.0 * t) * mode(s); }), 1e-3);
  }
}

TEST(SolveComparison, RicciRescaledStaysAboveExactModulus) {
  // lambda sin(sigma) is a subsolution of the rescaled equation with the same
  // boundary behaviour, so the profile lifted by eps stays above it.
  const double eps = 1e-3;
  const auto p = solve_comparison(profile(kPi / 2.0, 200, eps, Drift::ricci_rescaled(2), [&](double s) { return eps + std::sin(s); }),
                                  FlowSpec::heat(), 0.25, {0.1, 0.25});
  for (std::size_t i = 0; i < 2; ++i) {
    const double lambda = 1.0 - 2.0 * p.times[i];
    for (std::size_t j = 0; j < p.s_grid.size(); ++j) {
      EXPECT_GE(p.values_by_time[i][j], eps + lambda * std::sin(p.s_grid[j]) - 1e-6);
    }
    // value() takes physical distance s = sqrt(lambda) sigma.
    EXPECT_NEAR(p.value(i, std::sqrt(lambda) * p.s_grid[37]), p.values_by_time[i][37], 1e-12);
  }
  EXPECT_THROW(solve_comparison(p, FlowSpec::heat(), 0.5, {0.5}), PreconditionError);
}

TEST(SolveComparison, PoleProximityIsRejected) {
  // A node grid reaching the pole cannot be evaluated.
  ComparisonProfile p = profile(kPi / 2.0, 16, 0.1, Drift::c_kappa(1.0, 2), [](double) { return 0.1; });
  p.s_grid.back() = kPi / 2.0;
  EXPECT_THROW(solve_comparison(p, FlowSpec::heat(), 0.1, {0.1}), PoleError);
}

std::vector<double> random_monotone(std::mt19937_64& rng, std::size_t n, double start) {
  std::uniform_real_distribution<double> step(0.0, 0.05);
  std::vector<double> v(n);
  double x = start;
  for (auto& e : v) e = (x += step(rng));
  return v;
}

TEST(SolveComparisonProperty, MonotonicityAndOrdering) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> bump(0.0, 0.05);
  const std::vector<Drift> drifts{Drift::none(), Drift::c_kappa(1.0, 3), Drift::bakry_emery(-1.0)};
  const std::vector<FlowSpec> flows{FlowSpec::heat(), FlowSpec::graphical_mcf(), FlowSpec::p_laplacian(3.0)};
  for (int trial = 0; trial < 4; ++trial) {
    for (const auto& d : drifts) {
      for (const auto& f : flows) {
        ComparisonProfile lo = profile(kPi / 2.0, 48, 0.01, d, [](double) { return 0.0; });
        lo.initial = random_monotone(rng, 48, 0.01);
        ComparisonProfile hi = lo;
        for (double& x : hi.initial) x += bump(rng);
        // Keep hi nondecreasing after the bump.
        for (std::size_t j = 1; j < 48; ++j) hi.initial[j] = std::max(hi.initial[j], hi.initial[j - 1]);
        const auto a = solve_comparison(lo, f, 0.05, {0.02, 0.05});
        const auto b = solve_comparison(hi, f, 0.05, {0.02, 0.05});
        for (std::size_t k = 0; k < 2; ++k) {
          for (std::size_t j = 0; j < 48; ++j) {
            EXPECT_LE(a.values_by_time[k][j], b.values_by_time[k][j] + 1e-12);
            if (j > 0) EXPECT_GE(a.values_by_time[k][j], a.values_by_time[k][j - 1] - 1e-10);
            EXPECT_GE(a.values_by_time[k][j], 0.01 - 1e-12);
          }
        }
      }
    }
  }
}

TEST(CheckComparison, Examples) {
  const double eps = 0.01;
  auto p = solve_comparison(profile(1.0, 10, eps, Drift::none(), [&](double) { return eps; }), FlowSpec::heat(), 0.1, {0.0, 0.1});
  std::vector<ModulusCurve> zero{curve({0.2, 0.6}, {0.0, 0.0}, 0.0), curve({0.2, 0.6}, {0.0, 0.0}, 0.1)};
  EXPECT_DOUBLE_EQ(check_comparison(zero, p).max_violation, -eps);

  // w = phi - eps at every node.
  auto q = solve_comparison(profile(1.0, 10, eps, Drift::none(), [&](double s) { return eps + s * (2.0 - s); }),
                            FlowSpec::heat(), 0.1, {0.0, 0.1});
  std::vector<ModulusCurve> w;
  for (std::size_t k = 0; k < 2; ++k) {
    std::vector<double> v;
    for (double x : q.values_by_time[k]) v.push_back(x - eps);
    w.push_back(curve(q.s_grid, v, q.times[k]));
  }
  const auto check = check_comparison(w, q);
  EXPECT_NEAR(check.max_violation, -eps, 1e-15);
  ASSERT_EQ(check.per_time.size(), 2u);
  EXPECT_EQ(check.per_time[0].nonempty_bins, 10u);
}

TEST(CheckComparison, TimeMismatch) {
  const auto p = solve_comparison(profile(1.0, 10, 0.1, Drift::none(), [](double) { return 0.1; }), FlowSpec::heat(), 0.1, {0.0, 0.1});
  EXPECT_THROW(check_comparison({curve({0.5}, {0.0}, 0.0)}, p), TimeMismatchError);
  EXPECT_THROW(check_comparison({curve({0.5}, {0.0}, 0.0), curve({0.5}, {0.0}, 0.05)}, p), TimeMismatchError);
}

std::vector<double> nodes(double d, std::size_t n, const std::function<double(double)>& f) {
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = f(d * j / (n - 1));
  return v;
}

TEST(HeightProfile, Examples) {
  const double d = 2.0;
  const auto flat = solve_height_profile(FlowSpec::heat(), d, std::vector<double>(41, 0.3), 0.5, {0.5});
  for (double v : flat.values_by_time[0]) EXPECT_EQ(v, 0.3);

  const auto cosine = solve_height_profile(FlowSpec::heat(), d, nodes(d, 201, [&](double z) { return 1.0 - 0.5 * std::cos(kPi * z / d); }),
                                           0.5, {0.2, 0.5});
  for (std::size_t k = 0; k < 2; ++k) {
    const double t = cosine.times[k];
    EXPECT_LE(max_error(cosine, k, [&](double z) { return 1.0 - 0.5 * std::exp(-kPi * kPi / (d * d) * t) * std::cos(kPi * z / d); }), 1e-3);
  }

  const auto lin = solve_height_profile(FlowSpec::heat(), d, nodes(d, 101, [](double z) { return -0.2 + 0.7 * z; }), 1.0,
                                        {0.1, 0.5, 1.0});
  double prev_spread = 1.4;
  for (const auto& v : lin.values_by_time) {
    for (std::size_t j = 1; j < v.size(); ++j) EXPECT_GE(v[j], v[j - 1] - 1e-10);
    EXPECT_LT(v.back() - v.front(), prev_spread);
    prev_spread = v.back() - v.front();
  }
  EXPECT_THROW(solve_height_profile(FlowSpec::heat(), d, {0.0, 1.0, 0.5}, 0.1, {0.1}), StabilityError);
}

TEST(InvertProfile, Examples) {
  const auto z = nodes(2.0, 21, [](double z) { return z; });
  const auto phi = nodes(2.0, 21, [](double z) { return -0.5 + 3.0 * z; });
  const auto psi = invert_profile(z, phi);
  EXPECT_NEAR(psi(1.0), 0.5, 1e-15);
  for (std::size_t j = 0; j < z.size(); ++j) EXPECT_NEAR(psi(phi[j]), z[j], 1e-12);
  EXPECT_EQ(psi(-10.0), 0.0);
  EXPECT_EQ(psi(10.0), 2.0);
  // Plateau maps to its leftmost point.
  const auto plateau = invert_profile({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 1.0, 2.0});
  EXPECT_EQ(plateau(1.0), 1.0);
  EXPECT_EQ(plateau(0.0), 0.0);
  EXPECT_THROW(invert_profile({0.0, 1.0}, {1.0, 0.0}), PreconditionError);
}

}  // namespace
