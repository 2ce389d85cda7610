#include "moclab/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "moclab/comparison.hpp"
#include "moclab/errors.hpp"
#include "moclab/solver.hpp"

namespace moclab {
namespace {

constexpr double kHypothesisTolerance = 1e-9;
constexpr double kDirichletFloor = 1e-6;
constexpr double kHeightFloor = 1e-3;

struct Evolved {
  Grid grid;
  Trajectory traj;
  std::vector<double> times;
};

Field initial_field(const ScenarioSpec& sc, const Grid& g) {
  return Field::sample(sc.manifold, g, initial_function(sc.manifold, sc.u0));
}

Evolved run_flow(const ScenarioSpec& sc, const FlowSpec& flow, bool ricci) {
  sc.validate();
  Evolved e{make_grid(sc.manifold, sc.grid, sc.grid_y), {}, sc.times_with_start()};
  EvolveOptions eo;
  eo.cfl_safety = sc.cfl_safety;
  eo.dt_max = sc.dt_max;
  eo.ricci_flow = ricci;
  e.traj = evolve(sc.manifold, flow, initial_field(sc, e.grid), sc.horizon, e.times, eo);
  return e;
}

ModulusOptions modulus_options(const ScenarioSpec& sc) {
  ModulusOptions o;
  o.bins = sc.effective_bins();
  o.pair_budget = sc.pair_budget;
  o.seed = sc.seed;
  o.phi_samples = sc.phi_samples;
  o.max_empty_fraction = sc.max_empty_fraction;
  o.workers = sc.workers;
  return o;
}

void extract_curves(const ScenarioSpec& sc, const Trajectory& traj, Outcome& out) {
  const ModulusOptions mo = modulus_options(sc);
  for (const Field& f : traj.fields) {
    out.raw.push_back(extract_modulus(f, mo));
    out.envelope.push_back(increasing_envelope(out.raw.back()));
  }
}

// Largest slope of the envelope between consecutive nonempty bins, anchored at (0, 0).
double envelope_lipschitz(const ModulusCurve& w) {
  double lip = 0.0;
  double ps = 0.0;
  double pv = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (!w.nonempty[j]) continue;
    lip = std::max(lip, std::fabs(w.values[j] - pv) / (w.bin_centers[j] - ps));
    ps = w.bin_centers[j];
    pv = w.values[j];
  }
  return lip;
}

void fill_provenance(const ScenarioSpec& sc, const Evolved& e, const Outcome& o, VerificationReport& r) {
  auto& p = r.provenance;
  p.seed = sc.seed;
  p.grid_x = e.grid.nx;
  p.grid_y = e.grid.ny;
  p.bins = sc.effective_bins();
  p.profile_cells = sc.profile_cells > 0 ? sc.profile_cells : p.bins;
  p.phi_samples = e.grid.kind == GridKind::Theta1D ? sc.phi_samples : 0;
  p.pair_budget = sc.pair_budget;
  if (!o.raw.empty()) {
    p.pairs = o.raw.front().pairs;
    p.pairs_exhaustive = o.raw.front().exhaustive;
    p.bin_halfwidth = o.raw.front().bin_halfwidth;
  }
  p.h = e.grid.min_spacing();
  p.cfl_safety = sc.cfl_safety;
  p.dt_max = sc.dt_max;
  p.max_dt = e.traj.max_dt;
  p.steps = e.traj.steps;
}

// The viscosity spot test: at interior bins where the envelope touches the raw
// curve, difference quotients of w must satisfy the one-dimensional inequality.
void spot_test(const Outcome& o, const FlowSpec& flow, const Drift& drift, VerificationReport& r) {
  double worst = -INFINITY;
  std::size_t probes = 0;
  for (std::size_t k = 1; k < o.envelope.size(); ++k) {
    const ModulusCurve& w = o.envelope[k];
    const ModulusCurve& prev = o.envelope[k - 1];
    const double dt = w.time - prev.time;
    for (std::size_t j = 1; j + 1 < w.size(); ++j) {
      if (!(w.nonempty[j - 1] && w.nonempty[j] && w.nonempty[j + 1] && prev.nonempty[j])) continue;
      if (o.raw[k].values[j] != w.values[j]) continue;
      const double ds = w.bin_centers[j + 1] - w.bin_centers[j];
      const double d1 = (w.values[j + 1] - w.values[j - 1]) / (2.0 * ds);
      const double d2 = (w.values[j + 1] - 2.0 * w.values[j] + w.values[j - 1]) / (ds * ds);
      const double wt = (w.values[j] - prev.values[j]) / dt;
      const double s = w.bin_centers[j];
      double rhs = flow.alpha(std::fabs(d1), w.values[j], w.time) * d2;
      if (drift.kind == DriftKind::CKappa) {
        rhs += drift_coefficient(drift.kappa, drift.dimension, s) * flow.beta(std::fabs(d1), w.time) * d1;
      } else if (drift.kind == DriftKind::BakryEmery) {
        rhs -= drift.a * s * d1;
      }
      worst = std::max(worst, wt - rhs);
      ++probes;
    }
  }
  r.metrics["spot_test_probes"] = static_cast<double>(probes);
  if (probes > 0) r.metrics["spot_test_max_residual"] = worst;
  r.notes.push_back("spot test is a diagnostic only and does not affect pass/fail");
}

using Extra = std::function<void(const Evolved&, VerificationReport&)>;

Outcome comparison_family(const ScenarioSpec& sc, Theorem tag, const FlowSpec& flow,
                          const Drift& drift, double s_max, bool ricci, const Extra& extra = {}) {
  Outcome out;
  const Evolved e = run_flow(sc, flow, ricci);
  extract_curves(sc, e.traj, out);

  const std::size_t cells = sc.profile_cells > 0 ? sc.profile_cells : sc.effective_bins();
  ComparisonOptions co;
  co.cfl_safety = sc.cfl_safety;
  co.dt_max = sc.dt_max;
  const ComparisonProfile profile =
      make_comparison_profile(out.envelope.front(), sc.epsilon, s_max, cells, drift);
  const ComparisonProfile phi = solve_comparison(profile, flow, sc.horizon, e.times, co);
  const ComparisonCheck check = check_comparison(out.envelope, phi);

  VerificationReport& r = out.report;
  r.scenario_id = sc.id;
  r.theorem = tag;
  r.max_violation = check.max_violation;
  for (std::size_t k = 0; k < check.per_time.size(); ++k) {
    const auto& d = check.per_time[k];
    r.checkpoints.push_back(
        {d.time, d.max_margin, d.argmax_s, d.nonempty_bins, oscillation(e.traj.fields[k])});
    const ModulusCurve& w = out.envelope[k];
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (!w.nonempty[j]) continue;
      const double p = phi.value(k, w.bin_centers[j]);
      out.comparison.push_back({d.time, w.bin_centers[j], p, w.values[j], w.values[j] - p});
    }
  }
  const double lip = envelope_lipschitz(out.envelope.front());
  r.budget = {sc.epsilon, lip, out.raw.front().bin_halfwidth, lip, e.grid.min_spacing(),
              lip, e.traj.max_dt, 0.0};
  fill_provenance(sc, e, out, r);
  r.provenance.profile_cells = cells;
  r.provenance.profile_max_dt = phi.max_dt;
  r.metrics["lipschitz_initial_envelope"] = lip;
  r.metrics["s_max"] = s_max;
  r.notes.push_back(std::string("comparison drift: ") + to_string(drift.kind));
  r.notes.push_back("comparison uses the increasing envelope; a bound on it bounds the raw modulus");
  if (sc.spot_test) spot_test(out, flow, drift, r);
  if (extra) extra(e, r);
  r.finalize();
  return out;
}

void require_closed(const ScenarioSpec& sc, const char* what) {
  if (!sc.manifold.closed()) throw PreconditionError(std::string(what) + " needs a closed manifold");
}

// Central-difference gradient magnitude, maximised over the nodes of a flat periodic grid.
double max_discrete_gradient(const Field& f) {
  const Grid& g = f.grid;
  double best = 0.0;
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double ux = (f.values[g.index((i + 1) % g.nx, j)] -
                         f.values[g.index((i + g.nx - 1) % g.nx, j)]) / (2.0 * g.hx);
      double uy = 0.0;
      if (g.ny > 1) {
        uy = (f.values[g.index(i, (j + 1) % g.ny)] - f.values[g.index(i, (j + g.ny - 1) % g.ny)]) /
             (2.0 * g.hy);
      }
      best = std::max(best, std::sqrt(ux * ux + uy * uy));
    }
  }
  return best;
}

// max over distinct node pairs of |v(y) - v(x)| - d(x, y)
double max_spread_excess(const Field& v) {
  double worst = -INFINITY;
  for (const auto& l : lag_maxima(v)) {
    if (l.distance > 0.0) worst = std::max(worst, l.max_abs_diff - l.distance);
  }
  return worst;
}

Outcome hypothesis_not_met(const ScenarioSpec& sc, double defect, double tol, std::string why) {
  Outcome out;
  VerificationReport& r = out.report;
  r.scenario_id = sc.id;
  r.theorem = sc.theorem;
  r.status = Status::HypothesisNotMet;
  r.max_violation = defect;
  r.budget.floor = tol;
  r.tolerance_budget = tol;
  r.pass = false;
  r.provenance.seed = sc.seed;
  r.provenance.grid_x = sc.grid;
  r.notes.push_back(std::move(why));
  return out;
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Violation:
      return "violation";
    case Status::HypothesisNotMet:
      return "hypothesis-not-met";
  }
  return "violation";
}

void VerificationReport::finalize() {
  tolerance_budget = budget.total();
  pass = max_violation <= tolerance_budget;
  if (status != Status::HypothesisNotMet) status = pass ? Status::Pass : Status::Violation;
  if (status == Status::HypothesisNotMet) pass = false;
}

Outcome verify_main_estimate(const ScenarioSpec& sc) {
  require_closed(sc, "the main estimate");
  const ManifoldConstants mc = manifold_constants(sc.manifold);
  return comparison_family(sc, Theorem::Main, sc.flow, Drift::c_kappa(mc.ricci_lower, mc.dimension),
                           mc.diameter / 2.0, false);
}

Outcome verify_ricci_flow(const ScenarioSpec& sc) {
  if (!sc.manifold.is<RoundSphere>()) throw PreconditionError("Ricci-flow scenarios need the round sphere");
  sc.validate();
  const int n = sc.manifold.dimension();
  Outcome out = comparison_family(sc, Theorem::RicciFlow, sc.flow, Drift::ricci_rescaled(n),
                                  sc.manifold.diameter() / 2.0, true);
  out.report.notes.push_back("metric g(t) = (1 - 2(n-1)t) g(0); distances scaled by sqrt(lambda)");
  return out;
}

Outcome verify_bakry_emery(const ScenarioSpec& sc) {
  if (!sc.manifold.is<Circle>() && !sc.manifold.is<FlatTorus>()) {
    throw PreconditionError("Bakry-Emery scenarios run on the circle or the flat torus");
  }
  const Grid g = make_grid(sc.manifold, sc.grid, sc.grid_y);
  const double a = sc.flow.drift ? bakry_emery_constant(sc.manifold, g, *sc.flow.drift) : 0.0;
  Outcome out = comparison_family(
      sc, Theorem::BakryEmery, sc.flow, Drift::bakry_emery(a), sc.manifold.diameter() / 2.0, false,
      [&](const Evolved& e, VerificationReport& r) {
        r.metrics["bakry_emery_a"] = a;
        if (!sc.flow.drift) return;
        r.notes.push_back("drift potential: " + sc.flow.drift->description);
        const double m0 = conserved_mean(e.traj.fields.front(), sc.flow);
        double worst = 0.0;
        for (const Field& f : e.traj.fields) {
          worst = std::max(worst, std::fabs(conserved_mean(f, sc.flow) - m0));
        }
        r.metrics["weighted_mean_drift_per_time"] = worst / sc.horizon;
      });
  return out;
}

Outcome verify_neumann(const ScenarioSpec& sc) {
  if (sc.manifold.boundary() != Boundary::NeumannDomain) {
    throw PreconditionError("Neumann scenarios need an interval or rectangle with Neumann boundary");
  }
  Outcome out = comparison_family(sc, Theorem::Neumann, sc.flow, Drift::none(),
                                  sc.manifold.diameter() / 2.0, false);
  if (sc.flow.has_lower_order()) {
    out.report.notes.push_back("lower-order term b(|Du|, t) is isotropic and cancels pairwise");
  }
  return out;
}

Outcome verify_height_bound(const ScenarioSpec& sc) {
  require_closed(sc, "the height bound");
  if (sc.manifold.is<RoundSphere>()) {
    throw PreconditionError("height-bound scenarios run on the circle or the flat torus");
  }
  if (sc.flow.beta_uses_gradient) {
    throw PreconditionError("the height bound needs beta to depend on t only (flow of the form alpha(|Du|, u, t), beta(t))");
  }
  if (sc.flow.drift || sc.flow.has_lower_order()) {
    throw PreconditionError("the height bound takes no drift and no lower-order term");
  }
  sc.validate();
  const Grid grid = make_grid(sc.manifold, sc.grid, sc.grid_y);
  const Field u0 = initial_field(sc, grid);
  double lo = *std::min_element(u0.values.begin(), u0.values.end());
  double hi = *std::max_element(u0.values.begin(), u0.values.end());
  const double diameter = sc.manifold.diameter();
  const double grad = max_discrete_gradient(u0);
  Outcome out;
  VerificationReport& r = out.report;

  // phi0 = c - A cos(pi z / D): increasing, Neumann-compatible, and the heat
  // profile that saturates the bound for a first eigenfunction. Differences
  // of Psi shrink as A grows, so A is raised geometrically until the t = 0
  // inequality holds.
  const std::size_t nodes = std::max<std::size_t>(sc.height_cells, 2) + 1;
  std::vector<double> z(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    z[j] = diameter * static_cast<double>(j) / static_cast<double>(nodes - 1);
  }
  const double mid = 0.5 * (lo + hi);
  const double growth = 1.0 + sc.delta_g;
  double amplitude = growth * std::max(0.5 * (hi - lo), grad * diameter / std::numbers::pi);
  if (!(amplitude > 0.0)) amplitude = 1.0;
  auto profile = [&](double a) {
    std::vector<double> p(nodes);
    for (std::size_t j = 0; j < nodes; ++j) p[j] = mid - a * std::cos(std::numbers::pi * z[j] / diameter);
    return p;
  };
  auto transformed_by = [&](const Field& f, const std::vector<double>& table) {
    const MonotoneInverse psi = invert_profile(z, table);
    Field v = f;
    for (double& x : v.values) x = psi(x);
    return v;
  };
  std::vector<double> phi0 = profile(amplitude);
  double initial_excess = max_spread_excess(transformed_by(u0, phi0));
  for (int k = 0; initial_excess > 1e-12 && sc.delta_g > 0.0 && k < 200; ++k) {
    amplitude *= growth;
    phi0 = profile(amplitude);
    initial_excess = max_spread_excess(transformed_by(u0, phi0));
  }
  const double slope = amplitude * std::numbers::pi / diameter;
  if (initial_excess > 1e-12) {
    Outcome bad = hypothesis_not_met(
        sc, initial_excess, 1e-12,
        "Psi(u(y,0)) - Psi(u(x,0)) - d(x,y) > 0 at t = 0: increase delta_g so the profile can be widened");
    bad.report.metrics["G"] = slope;
    return bad;
  }

  const std::vector<double> times = sc.times_with_start();
  ComparisonOptions co;
  co.cfl_safety = sc.cfl_safety;
  co.dt_max = sc.dt_max;
  const ComparisonProfile phi = solve_height_profile(sc.flow, diameter, phi0, sc.horizon, times, co);

  auto transformed = [&](const Field& f, std::size_t k) { return transformed_by(f, phi.values_by_time[k]); };

  EvolveOptions eo;
  eo.cfl_safety = sc.cfl_safety;
  eo.dt_max = sc.dt_max;
  const Trajectory traj = evolve(sc.manifold, sc.flow, u0, sc.horizon, times, eo);
  extract_curves(sc, traj, out);

  r.scenario_id = sc.id;
  r.theorem = Theorem::HeightBound;
  r.max_violation = -INFINITY;
  double range_margin = INFINITY;  // negative once u leaves [phi(0, t), phi(D, t)]
  for (std::size_t k = 0; k < traj.fields.size(); ++k) {
    const double excess = max_spread_excess(transformed(traj.fields[k], k));
    const auto [umin, umax] = std::minmax_element(traj.fields[k].values.begin(), traj.fields[k].values.end());
    range_margin = std::min({range_margin, *umin - phi.values_by_time[k].front(), phi.values_by_time[k].back() - *umax});
    r.max_violation = std::max(r.max_violation, excess);
    r.checkpoints.push_back({times[k], excess, 0.0, 0, oscillation(traj.fields[k])});
    // Diagnostic column: modulus of phi, max_z (phi(z + 2s) - phi(z)) / 2.
    const ModulusCurve& w = out.envelope[k];
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (!w.nonempty[j]) continue;
      const double s = w.bin_centers[j];
      double pm = 0.0;
      for (std::size_t i = 0; i < nodes && z[i] + 2.0 * s <= diameter; ++i) {
        pm = std::max(pm, 0.5 * (phi.value(k, z[i] + 2.0 * s) - phi.values_by_time[k][i]));
      }
      out.comparison.push_back({times[k], s, pm, w.values[j], w.values[j] - pm});
    }
  }
  r.budget.floor = kHeightFloor;
  Evolved e{grid, traj, times};
  fill_provenance(sc, e, out, r);
  r.provenance.profile_cells = nodes - 1;
  r.provenance.profile_max_dt = phi.max_dt;
  r.metrics["G"] = slope;
  r.metrics["profile_amplitude"] = amplitude;
  r.metrics["range_margin"] = range_margin;
  r.metrics["max_discrete_gradient"] = grad;
  r.metrics["initial_excess"] = initial_excess;
  r.metrics["pairs_per_checkpoint"] = static_cast<double>(grid.size()) * static_cast<double>(grid.size());
  r.notes.push_back("checkpoint max_margin is max over pairs of Psi(u(y)) - Psi(u(x)) - d(x, y)");
  r.finalize();
  return out;
}

Outcome verify_dirichlet(const ScenarioSpec& sc, const Supersolution& phi) {
  if (sc.manifold.boundary() != Boundary::DirichletDomain) {
    throw PreconditionError("Dirichlet scenarios need an interval or rectangle with Dirichlet boundary");
  }
  sc.validate();
  const Grid grid = make_grid(sc.manifold, sc.grid, sc.grid_y);
  const auto f0 = initial_function(sc.manifold, sc.u0);
  double scale = 1.0;
  for (std::size_t n = 0; n < grid.size(); ++n) scale = std::max(scale, std::fabs(f0(grid.point(n))));
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (grid.on_boundary(n) && std::fabs(f0(grid.point(n))) > 1e-12 * scale) {
      throw PreconditionError("u0 must vanish on the boundary");
    }
  }
  const Field u0 = Field::sample(sc.manifold, grid, f0);

  // Hypotheses on phi, sampled on (0, D/2] and over the checkpoints and midpoints.
  const double half = sc.manifold.diameter() / 2.0;
  const std::size_t ns = 64;
  const double ds = half / static_cast<double>(ns);
  std::vector<double> ts{0.0};
  double prev = 0.0;
  for (double c : sc.checkpoints) {
    ts.push_back(0.5 * (prev + c));
    ts.push_back(c);
    prev = c;
  }
  const double tau = 1e-4 * sc.horizon;
  double phi_scale = 1.0;
  for (double t : ts) phi_scale = std::max(phi_scale, std::fabs(phi(half, t)));
  const double tol = kHypothesisTolerance * phi_scale;
  double monotone_defect = -INFINITY;
  double concave_defect = -INFINITY;
  double super_defect = -INFINITY;
  for (double t : ts) {
    for (std::size_t i = 1; i <= ns; ++i) {
      const double s = ds * static_cast<double>(i);
      const double p0 = phi(s, t);
      const double pm = phi(s - ds, t);
      monotone_defect = std::max(monotone_defect, pm - p0);
      if (i < ns) {
        const double pp = phi(s + ds, t);
        const double d2 = (pp - 2.0 * p0 + pm) / (ds * ds);
        concave_defect = std::max(concave_defect, (pp - 2.0 * p0 + pm));
        const double d1 = (pp - pm) / (2.0 * ds);
        const double tp = std::min(t + tau, sc.horizon);
        const double tm = std::max(t - tau, 0.0);
        const double pt = (phi(s, tp) - phi(s, tm)) / (tp - tm);
        const double rhs = sc.flow.alpha(std::fabs(d1), p0, t) * d2;
        super_defect = std::max(super_defect, (rhs - pt) * ds * ds);
      }
    }
  }
  ModulusOptions mo = modulus_options(sc);
  const ModulusCurve w0 = extract_modulus(u0, mo);
  double initial_defect = -INFINITY;
  for (std::size_t j = 0; j < w0.size(); ++j) {
    if (w0.nonempty[j]) initial_defect = std::max(initial_defect, w0.values[j] - phi(w0.bin_centers[j], 0.0));
  }
  struct Check {
    const char* name;
    double defect;
  };
  for (const Check& c : {Check{"phi increasing in s", monotone_defect},
                         Check{"phi concave in s", concave_defect},
                         Check{"phi_t >= alpha phi''", super_defect},
                         Check{"phi(., 0) >= modulus of u0", initial_defect}}) {
    if (c.defect > tol) {
      Outcome bad = hypothesis_not_met(sc, c.defect, tol,
                                       std::string("hypothesis failed: ") + c.name + " (phi = " +
                                           phi.describe() + ")");
      bad.report.metrics["monotone_defect"] = monotone_defect;
      bad.report.metrics["concave_defect"] = concave_defect;
      bad.report.metrics["supersolution_defect"] = super_defect;
      bad.report.metrics["initial_defect"] = initial_defect;
      return bad;
    }
  }

  Outcome out;
  const std::vector<double> times = sc.times_with_start();
  EvolveOptions eo;
  eo.cfl_safety = sc.cfl_safety;
  eo.dt_max = sc.dt_max;
  const Trajectory traj = evolve(sc.manifold, sc.flow, u0, sc.horizon, times, eo);
  extract_curves(sc, traj, out);
  VerificationReport& r = out.report;
  r.scenario_id = sc.id;
  r.theorem = Theorem::Dirichlet;
  r.max_violation = -INFINITY;
  for (std::size_t k = 0; k < traj.fields.size(); ++k) {
    const double t = times[k];
    double worst = -INFINITY;
    double at = 0.0;
    for (const auto& l : lag_maxima(traj.fields[k])) {
      if (l.distance <= 0.0) continue;
      const double excess = l.max_abs_diff - 2.0 * phi(l.distance / 2.0, t);
      if (excess > worst) {
        worst = excess;
        at = l.distance / 2.0;
      }
    }
    r.max_violation = std::max(r.max_violation, worst);
    r.checkpoints.push_back({t, worst, at, 0, oscillation(traj.fields[k])});
    const ModulusCurve& w = out.envelope[k];
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (!w.nonempty[j]) continue;
      const double p = phi(w.bin_centers[j], t);
      out.comparison.push_back({t, w.bin_centers[j], p, w.values[j], w.values[j] - p});
    }
  }
  r.budget.floor = kDirichletFloor;
  Evolved e{grid, traj, times};
  fill_provenance(sc, e, out, r);
  r.metrics["monotone_defect"] = monotone_defect;
  r.metrics["concave_defect"] = concave_defect;
  r.metrics["supersolution_defect"] = super_defect;
  r.metrics["initial_defect"] = initial_defect;
  r.notes.push_back("supersolution: " + phi.describe());
  r.notes.push_back("checkpoint max_margin is max over pairs of u(y) - u(x) - 2 phi(d/2, t)");
  r.finalize();
  return out;
}

DiffusionMatrix isotropic_matrix(const FlowSpec& flow, int dim) {
  return [flow, dim](const std::vector<double>& p, double t) {
    double r2 = 0.0;
    for (double x : p) r2 += x * x;
    const double r = std::sqrt(r2);
    const double a = flow.alpha(r, 0.0, t);
    const double b = flow.beta(r, t);
    std::vector<double> m(static_cast<std::size_t>(dim * dim));
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        m[static_cast<std::size_t>(i * dim + j)] = (i == j ? b : 0.0) + (a - b) * p[i] * p[j] / r2;
      }
    }
    return m;
  };
}

AdmissibilityResult alpha_admissible(const DiffusionMatrix& a,
                                     const std::function<double(double r, double t)>& alpha,
                                     std::size_t samples, std::uint64_t seed, int dim) {
  if (samples < 1) throw PreconditionError("alpha admissibility needs samples >= 1");
  if (dim < 1) throw PreconditionError("dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> log_r(std::log(1e-3), std::log(1e3));
  std::uniform_real_distribution<double> time(0.0, 1.0);
  const auto d = static_cast<std::size_t>(dim);

  AdmissibilityResult res;
  res.worst_ratio = INFINITY;
  res.max_defect = -INFINITY;
  std::vector<double> dir(d);
  std::vector<double> v(d);
  std::vector<double> p(d);
  auto probe = [&](double r, double t, const std::vector<double>& m, double al) {
    double vp = 0.0;
    double vv = 0.0;
    for (std::size_t i = 0; i < d; ++i) vp += v[i] * p[i];
    for (std::size_t i = 0; i < d; ++i) vv += v[i] * v[i];
    if (std::fabs(vp) <= 1e-12 * std::sqrt(vv) * r) return;  // (v . p) must not vanish
    double quad = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < d; ++j) row += m[i * d + j] * v[j];
      quad += v[i] * row;
    }
    const double rhs = r * r * quad / (vp * vp);
    const double defect = al > 0.0 ? (al - rhs) / std::max(1.0, al) : 1.0;
    res.max_defect = std::max(res.max_defect, defect);
    if (al > 0.0) res.worst_ratio = std::min(res.worst_ratio, rhs / al);
    ++res.samples;
    (void)t;
  };
  for (std::size_t s = 0; s < samples; ++s) {
    const double r = std::exp(log_r(rng));
    double norm = 0.0;
    for (auto& x : dir) {
      x = normal(rng);
      norm += x * x;
    }
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < d; ++i) p[i] = r * dir[i] / norm;
    for (auto& x : v) x = normal(rng);
    const double t = time(rng);
    const std::vector<double> m = a(p, t);
    const double al = alpha(r, t);
    probe(r, t, m, al);
    v = p;
    probe(r, t, m, al);
  }
  res.pass = res.max_defect <= kAdmissibilityTolerance;
  return res;
}

Outcome verify_alpha_admissible(const ScenarioSpec& sc) {
  sc.validate();
  const FlowSpec flow = sc.flow;
  const AdmissibilityResult res =
      alpha_admissible(isotropic_matrix(flow, sc.alpha_dimension),
                       [flow](double r, double t) { return flow.alpha(r, 0.0, t); }, sc.samples,
                       sc.seed, sc.alpha_dimension);
  Outcome out;
  VerificationReport& r = out.report;
  r.scenario_id = sc.id;
  r.theorem = Theorem::AlphaAdmissible;
  r.max_violation = res.max_defect;
  r.budget.floor = kAdmissibilityTolerance;
  r.provenance.seed = sc.seed;
  r.metrics["worst_ratio"] = res.worst_ratio;
  r.metrics["samples"] = static_cast<double>(sc.samples);
  r.metrics["probes"] = static_cast<double>(res.samples);
  r.metrics["dimension"] = sc.alpha_dimension;
  r.notes.push_back("flow: " + to_string(flow.preset));
  r.notes.push_back("max_violation is the largest relative defect (alpha - bound) / max(1, alpha)");
  r.finalize();
  return out;
}

double bakry_emery_constant(const ManifoldModel& m, const Grid& g, const DriftPotential& f) {
  if (!m.is<Circle>() && !m.is<FlatTorus>()) {
    throw PreconditionError("the Bakry-Emery constant is computed on flat closed models only");
  }
  double a = INFINITY;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto h = f.hessian(g.point(n));
    double lo = h[0];
    if (g.ny > 1) {
      const double mean = 0.5 * (h[0] + h[2]);
      const double rad = std::sqrt(0.25 * (h[0] - h[2]) * (h[0] - h[2]) + h[1] * h[1]);
      lo = mean - rad;
    }
    a = std::min(a, lo);
  }
  return a;
}

Outcome verify(const ScenarioSpec& sc) {
  switch (sc.theorem) {
    case Theorem::Main:
      return verify_main_estimate(sc);
    case Theorem::RicciFlow:
      return verify_ricci_flow(sc);
    case Theorem::HeightBound:
      return verify_height_bound(sc);
    case Theorem::BakryEmery:
      return verify_bakry_emery(sc);
    case Theorem::Neumann:
      return verify_neumann(sc);
    case Theorem::Dirichlet:
      return verify_dirichlet(sc, sc.phi);
    case Theorem::AlphaAdmissible:
      return verify_alpha_admissible(sc);
  }
  throw PreconditionError("unknown theorem");
}

}  // namespace moclab
