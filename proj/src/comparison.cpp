#include "moclab/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "moclab/errors.hpp"
#include "moclab/geometry.hpp"
#include "moclab/simd/kernels.hpp"

namespace moclab {
namespace {

// Linear interpolation on sorted knots, constant outside.
double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin());
  const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return ys[j - 1] + w * (ys[j] - ys[j - 1]);
}

void check_checkpoints(double horizon, const std::vector<double>& checkpoints) {
  if (!(horizon > 0.0)) throw PreconditionError("horizon must be positive");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 0.0 || checkpoints[i] > horizon) {
      throw PreconditionError("checkpoint outside [0, horizon]");
    }
    if (i > 0 && checkpoints[i] < checkpoints[i - 1]) {
      throw PreconditionError("checkpoints must be sorted");
    }
  }
}

double ricci_scale(const Drift& d, double t) { return 1.0 - 2.0 * (d.dimension - 1) * t; }

void check_monotone(const std::vector<double>& phi, double tol, double t) {
  for (std::size_t j = 1; j < phi.size(); ++j) {
    if (phi[j] < phi[j - 1] - tol) {
      throw StabilityError("profile lost monotonicity at t = " + std::to_string(t) + ", node " +
                           std::to_string(j) + " (CFL or sign of alpha)");
    }
  }
}

// Explicit Euler for phi_t = A phi'' + V phi' on a one-dimensional grid. A and
// V are re-evaluated from the current state every step.
class ProfileStepper {
 public:
  ProfileStepper(const ComparisonProfile& p, const FlowSpec& spec) : p_(p), spec_(spec) {
    const std::size_t m = p.s_grid.size();
    static_drift_.assign(m, 0.0);
    if (p.drift.kind == DriftKind::CKappa) {
      for (std::size_t j = 0; j < m; ++j) {
        static_drift_[j] =
            drift_coefficient(p.drift.kappa, p.drift.dimension, p.s_grid[j], 0.25 * p.h);
      }
    } else if (p.drift.kind == DriftKind::BakryEmery) {
      for (std::size_t j = 0; j < m; ++j) static_drift_[j] = -p.drift.a * p.s_grid[j];
    }
  }

  // Fills rhs, returns the largest diagonal weight (for the time step).
  double rhs(const std::vector<double>& phi, double t, std::vector<double>& out) const {
    const std::size_t m = phi.size();
    const double h = p_.h;
    const bool ricci = p_.drift.kind == DriftKind::RicciRescaled;
    const double lambda = ricci ? ricci_scale(p_.drift, t) : 1.0;
    const double root = std::sqrt(lambda);
    out.resize(m);
    double peak = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double left = 0.0;
      double right = 0.0;
      bool dirichlet_node = false;
      if (j > 0) {
        left = phi[j - 1];
      } else if (p_.left_dirichlet) {
        left = 2.0 * p_.left_bc - phi[0];
        dirichlet_node = true;
      } else {
        left = p_.node_centred ? phi[std::min<std::size_t>(1, m - 1)] : phi[0];
      }
      if (j + 1 < m) {
        right = phi[j + 1];
      } else {
        right = p_.node_centred ? phi[m >= 2 ? m - 2 : 0] : phi[m - 1];
      }
      const double d1 = (right - left) / (2.0 * h);
      const double d2 = ((right - phi[j]) - (phi[j] - left)) / (h * h);
      // One-sided RMS slope, matching the flow solver at kinks.
      const double q = std::sqrt(0.5 * ((right - phi[j]) * (right - phi[j]) + (phi[j] - left) * (phi[j] - left))) /
                       (h * root);
      double a = spec_.alpha(q, phi[j], t) / lambda;
      double v = 0.0;
      switch (p_.drift.kind) {
        case DriftKind::NoDrift:
          break;
        case DriftKind::CKappa:
          v = static_drift_[j] * spec_.beta(q, t);
          break;
        case DriftKind::BakryEmery:
          v = static_drift_[j];
          break;
        case DriftKind::RicciRescaled:
          v = -(p_.drift.dimension - 1.0) / lambda * p_.s_grid[j];
          break;
      }
      double slope = d1;
      double weight = (dirichlet_node ? 3.0 : 2.0) * a / (h * h);
      if (std::fabs(v) * h > 2.0 * a) {
        // Central differencing would break monotonicity; upwind instead.
        slope = v > 0.0 ? (right - phi[j]) / h : (phi[j] - left) / h;
        weight += std::fabs(v) / h;
      }
      out[j] = a * d2 + v * slope;
      peak = std::max(peak, weight);
    }
    return peak;
  }

 private:
  const ComparisonProfile& p_;
  const FlowSpec& spec_;
  std::vector<double> static_drift_;
};

ComparisonProfile integrate(ComparisonProfile p, const FlowSpec& spec, double horizon,
                            const std::vector<double>& checkpoints, const ComparisonOptions& opt) {
  check_checkpoints(horizon, checkpoints);
  if (p.initial.size() != p.s_grid.size() || p.s_grid.empty()) {
    throw PreconditionError("profile initial data does not match its grid");
  }
  if (p.drift.kind == DriftKind::RicciRescaled && horizon >= 0.5 / (p.drift.dimension - 1.0)) {
    throw PreconditionError("Ricci-rescaled profile horizon must stay below 1/(2(n-1))");
  }
  const auto& k = simd::kernels();
  ProfileStepper stepper(p, spec);
  std::vector<double> phi = p.initial;
  std::vector<double> rhs;
  double t = 0.0;
  p.times.clear();
  p.values_by_time.clear();
  for (double target : checkpoints) {
    while (t < target) {
      const double peak = stepper.rhs(phi, t, rhs);
      if (!(peak > 0.0)) {
        if (std::any_of(rhs.begin(), rhs.end(), [](double r) { return r != 0.0; })) {
          throw DegenerateDiffusionError("profile diffusion vanishes but the drift does not");
        }
        t = target;
        break;
      }
      double dt = std::min(opt.dt_max, opt.cfl_safety / peak);
      p.max_dt = std::max(p.max_dt, dt);
      const bool last = t + dt >= target;
      if (last) dt = target - t;
      k.axpy(phi.data(), rhs.data(), dt, phi.size());
      t = last ? target : t + dt;
      for (double v : phi) {
        if (!std::isfinite(v)) throw StabilityError("non-finite profile value");
      }
    }
    check_monotone(phi, opt.monotone_tol, target);
    p.times.push_back(target);
    p.values_by_time.push_back(phi);
  }
  return p;
}

}  // namespace

const char* to_string(DriftKind kind) {
  switch (kind) {
    case DriftKind::NoDrift:
      return "none";
    case DriftKind::CKappa:
      return "c-kappa";
    case DriftKind::BakryEmery:
      return "bakry-emery";
    case DriftKind::RicciRescaled:
      return "ricci-rescaled";
  }
  return "none";
}

double ComparisonProfile::value(std::size_t k, double s) const {
  if (k >= values_by_time.size()) throw PreconditionError("profile checkpoint out of range");
  double x = s;
  if (drift.kind == DriftKind::RicciRescaled) x = s / std::sqrt(ricci_scale(drift, times[k]));
  const auto& ys = values_by_time[k];
  if (left_dirichlet && !node_centred && x < s_grid.front()) {
    const double w = std::max(0.0, x) / s_grid.front();
    return left_bc + w * (ys.front() - left_bc);
  }
  return interpolate(s_grid, ys, x);
}

std::vector<double> make_s_grid(double s_max, std::size_t cells) {
  if (!(s_max > 0.0) || cells < 2) throw PreconditionError("s-grid needs s_max > 0 and >= 2 cells");
  const double h = s_max / static_cast<double>(cells);
  std::vector<double> s(cells);
  for (std::size_t j = 0; j < cells; ++j) s[j] = (static_cast<double>(j) + 0.5) * h;
  return s;
}

std::vector<double> build_supersolution_initial(const ModulusCurve& w0, double epsilon,
                                                const std::vector<double>& s_grid) {
  if (!(epsilon > 0.0)) throw PreconditionError("the lift epsilon must be positive");
  if (!w0.envelope_applied) throw PreconditionError("initial modulus must be the increasing envelope");
  std::vector<double> xs{0.0};
  std::vector<double> ys{0.0};
  for (std::size_t j = 0; j < w0.size(); ++j) {
    if (!w0.nonempty[j]) continue;
    xs.push_back(w0.bin_centers[j]);
    ys.push_back(w0.values[j]);
  }
  if (xs.size() == 1) throw EmptyBinsError("every bin of the initial modulus is empty");
  std::vector<double> out(s_grid.size());
  for (std::size_t j = 0; j < s_grid.size(); ++j) out[j] = interpolate(xs, ys, s_grid[j]) + epsilon;
  return out;
}

ComparisonProfile make_comparison_profile(const ModulusCurve& w0, double epsilon, double s_max,
                                          std::size_t cells, const Drift& drift) {
  ComparisonProfile p;
  p.s_grid = make_s_grid(s_max, cells);
  p.h = s_max / static_cast<double>(cells);
  p.left_dirichlet = true;
  p.left_bc = epsilon;
  p.epsilon_lift = epsilon;
  p.drift = drift;
  p.right_bc = drift.kind == DriftKind::CKappa && drift.kappa > 0.0 ? RightBoundary::PoleGuarded
                                                                     : RightBoundary::NeumannZero;
  p.initial = build_supersolution_initial(w0, epsilon, p.s_grid);
  return p;
}

ComparisonProfile solve_comparison(const ComparisonProfile& profile, const FlowSpec& spec,
                                   double horizon, const std::vector<double>& checkpoints,
                                   const ComparisonOptions& options) {
  return integrate(profile, spec, horizon, checkpoints, options);
}

ComparisonCheck check_comparison(const std::vector<ModulusCurve>& w, const ComparisonProfile& phi) {
  if (w.size() != phi.times.size()) {
    throw TimeMismatchError(std::to_string(w.size()) + " modulus curves against " +
                            std::to_string(phi.times.size()) + " profile checkpoints");
  }
  ComparisonCheck out;
  out.max_violation = -INFINITY;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double t = phi.times[k];
    if (std::fabs(w[k].time - t) > 1e-12 * std::max(1.0, std::fabs(t))) {
      throw TimeMismatchError("modulus at t = " + std::to_string(w[k].time) +
                              " against profile at t = " + std::to_string(t));
    }
    if (!w[k].envelope_applied) throw PreconditionError("comparison needs the increasing envelope");
    CheckpointDiagnostic d;
    d.time = t;
    d.max_margin = -INFINITY;
    for (std::size_t j = 0; j < w[k].size(); ++j) {
      if (!w[k].nonempty[j]) continue;
      ++d.nonempty_bins;
      const double margin = w[k].values[j] - phi.value(k, w[k].bin_centers[j]);
      if (margin > d.max_margin) {
        d.max_margin = margin;
        d.argmax_s = w[k].bin_centers[j];
      }
    }
    out.max_violation = std::max(out.max_violation, d.max_margin);
    out.per_time.push_back(d);
  }
  return out;
}

ComparisonProfile solve_height_profile(const FlowSpec& spec, double diameter,
                                       const std::vector<double>& phi0, double horizon,
                                       const std::vector<double>& checkpoints,
                                       const ComparisonOptions& options) {
  if (!(diameter > 0.0)) throw PreconditionError("height profile needs a positive length");
  if (phi0.size() < 3) throw PreconditionError("height profile needs at least 3 nodes");
  check_monotone(phi0, 0.0, 0.0);
  ComparisonProfile p;
  p.node_centred = true;
  p.left_dirichlet = false;
  p.h = diameter / static_cast<double>(phi0.size() - 1);
  p.s_grid.resize(phi0.size());
  for (std::size_t j = 0; j < phi0.size(); ++j) p.s_grid[j] = static_cast<double>(j) * p.h;
  p.s_grid.back() = diameter;
  p.initial = phi0;
  return integrate(std::move(p), spec, horizon, checkpoints, options);
}

MonotoneInverse::MonotoneInverse(std::vector<double> z, std::vector<double> phi)
    : z_(std::move(z)), phi_(std::move(phi)) {
  if (z_.size() != phi_.size() || z_.size() < 2) {
    throw PreconditionError("inverse table needs matching arrays of length >= 2");
  }
  for (std::size_t j = 1; j < phi_.size(); ++j) {
    if (phi_[j] < phi_[j - 1]) throw PreconditionError("cannot invert a decreasing profile");
  }
}

double MonotoneInverse::operator()(double r) const {
  if (r <= phi_.front()) return z_.front();
  if (r > phi_.back()) return z_.back();
  const auto it = std::lower_bound(phi_.begin(), phi_.end(), r);
  const std::size_t j = static_cast<std::size_t>(it - phi_.begin());
  if (phi_[j] == r) return z_[j];
  const double w = (r - phi_[j - 1]) / (phi_[j] - phi_[j - 1]);
  return z_[j - 1] + w * (z_[j] - z_[j - 1]);
}

MonotoneInverse invert_profile(const std::vector<double>& z, const std::vector<double>& phi) {
  return MonotoneInverse(z, phi);
}

}  // namespace moclab
