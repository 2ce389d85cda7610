#include "moclab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "moclab/errors.hpp"
#include "moclab/simd/kernels.hpp"

namespace moclab {
namespace {

// Integral of sin^m over [a, b], by the usual reduction formula.
double sin_power_integral(int m, double a, double b) {
  if (m == 0) return b - a;
  if (m == 1) return 2.0 * std::sin(0.5 * (a + b)) * std::sin(0.5 * (b - a));
  const double boundary = std::pow(std::sin(b), m - 1) * std::cos(b) -
                          std::pow(std::sin(a), m - 1) * std::cos(a);
  return -boundary / m + (m - 1.0) / m * sin_power_integral(m - 2, a, b);
}

int cfl_dimension(const Field& f) {
  return f.grid.kind == GridKind::Theta1D ? f.manifold.dimension() : f.grid.dimension();
}

std::size_t ghost_index(long k, std::size_t n, bool periodic) {
  const long len = static_cast<long>(n);
  if (periodic) return static_cast<std::size_t>(((k % len) + len) % len);
  return static_cast<std::size_t>(std::clamp(k, 0L, len - 1));
}

// Discrete operator for one grid/flow pair. Geometry-dependent quantities are
// computed once; apply() is called every time step.
class Operator {
 public:
  Operator(const Field& shape, const FlowSpec& spec) : spec_(spec), grid_(shape.grid) {
    const Grid& g = grid_;
    width_ = g.nx + 2;
    height_ = g.ny > 1 ? g.ny + 2 : 3;
    pad_.assign(width_ * height_, 0.0);
    const std::size_t n = g.size();
    for (auto* v : {&dx_, &dy_, &dxx_, &dyy_, &mix_, &cxx_, &cyy_, &cmix_, &constant_}) {
      v->assign(n, 0.0);
    }
    if (g.ny > 1) {
      diag_.assign(n, 0.0);
      anti_.assign(n, 0.0);
    }
    if (g.kind == GridKind::Theta1D) {
      if (spec.drift) throw PreconditionError("drift potentials are supported on flat models only");
      const int dim = shape.manifold.dimension();
      area_.resize(g.nx + 1);
      flux_.resize(g.nx + 1);
      inv_volume_.resize(g.nx);
      for (std::size_t k = 0; k <= g.nx; ++k) {
        area_[k] = std::pow(std::sin(static_cast<double>(k) * g.hx), dim - 1);
      }
      area_.front() = dim > 1 ? 0.0 : 1.0;
      area_.back() = dim > 1 ? 0.0 : 1.0;
      for (std::size_t j = 0; j < g.nx; ++j) {
        const double a = static_cast<double>(j) * g.hx;
        inv_volume_[j] = 1.0 / sin_power_integral(dim - 1, a, a + g.hx);
      }
    }
    if (spec.drift) setup_drift(*spec.drift);
  }

  bool stationary_if_degenerate() const { return !spec_.has_lower_order() && !spec_.drift; }

  double apply(const Field& u, std::vector<double>& out) {
    out.resize(grid_.size());
    fill_pad(u.values);
    const double peak = grid_.kind == GridKind::Theta1D ? apply_theta(u, out) : apply_flat(u, out);
    for (double v : out) {
      if (!std::isfinite(v)) throw StabilityError("non-finite value in the discrete right-hand side");
    }
    return peak;
  }

 private:
  void setup_drift(const DriftPotential& f) {
    const Grid& g = grid_;
    const std::size_t n = g.size();
    east_.resize(n);
    west_.resize(n);
    north_.assign(n, 0.0);
    south_.assign(n, 0.0);
    for (std::size_t node = 0; node < n; ++node) {
      const Point p = g.point(node);
      const double fc = f.value(p);
      east_[node] = std::exp(fc - f.value({p.x + 0.5 * g.hx, p.y})) - 1.0;
      west_[node] = std::exp(fc - f.value({p.x - 0.5 * g.hx, p.y})) - 1.0;
      if (g.ny > 1) {
        north_[node] = std::exp(fc - f.value({p.x, p.y + 0.5 * g.hy})) - 1.0;
        south_[node] = std::exp(fc - f.value({p.x, p.y - 0.5 * g.hy})) - 1.0;
      }
    }
  }

  void fill_pad(const std::vector<double>& v) {
    const Grid& g = grid_;
    const bool periodic = g.kind == GridKind::Periodic;
    for (std::size_t r = 0; r < height_; ++r) {
      const std::size_t j = g.ny > 1 ? ghost_index(static_cast<long>(r) - 1, g.ny, periodic) : 0;
      double* row = &pad_[r * width_];
      for (std::size_t c = 0; c < width_; ++c) {
        row[c] = v[j * g.nx + ghost_index(static_cast<long>(c) - 1, g.nx, periodic)];
      }
    }
  }

  const double* centre(std::size_t j) const { return &pad_[(j + 1) * width_ + 1]; }

  double apply_theta(const Field& u, std::vector<double>& out) {
    const auto& k = simd::kernels();
    const Grid& g = grid_;
    const std::size_t n = g.nx;
    const double h = g.hx;
    const double lambda = u.metric_scale;
    const double root = std::sqrt(lambda);
    const double* c = centre(0);

    k.first_difference(c - 1, c + 1, 0.5 / h, dx_.data(), n);
    k.second_difference(c - 1, c, c + 1, 1.0 / (h * h), dxx_.data(), n);
    // Face gradients; faces 0 and n sit on the poles where the mirror gives 0.
    k.first_difference(c - 1, c, 1.0 / h, flux_.data(), n + 1);
    for (std::size_t j = 0; j < n; ++j) {
      dx_[j] = std::sqrt(0.5 * (flux_[j] * flux_[j] + flux_[j + 1] * flux_[j + 1]));
    }
    for (std::size_t f = 0; f <= n; ++f) flux_[f] *= area_[f];
    k.first_difference(flux_.data(), flux_.data() + 1, 1.0, mix_.data(), n);
    for (std::size_t j = 0; j < n; ++j) mix_[j] *= inv_volume_[j];

    double peak = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double q = std::fabs(dx_[j]) / root;
      const double a = spec_.alpha(q, u.values[j], u.time);
      const double b = spec_.beta(q, u.time);
      cxx_[j] = b / lambda;  // multiplies the divergence-form Laplacian
      cyy_[j] = (a - b) / lambda;
      constant_[j] = spec_.lower_order(q, u.time);
      peak = std::max(peak, std::max(a, b) / lambda);
    }
    // dy_/dyy_ stay zero and serve as the unused third term.
    k.combine(cxx_.data(), mix_.data(), cyy_.data(), dxx_.data(), dy_.data(), dyy_.data(),
              constant_.data(), out.data(), n);
    return peak;
  }

  double apply_flat(const Field& u, std::vector<double>& out) {
    const auto& k = simd::kernels();
    const Grid& g = grid_;
    const std::size_t nx = g.nx;
    const bool two_d = g.ny > 1;
    const double hx = g.hx;
    const double hy = g.hy;

    for (std::size_t j = 0; j < g.ny; ++j) {
      const double* c = centre(j);
      const std::size_t off = j * nx;
      k.first_difference(c - 1, c + 1, 0.5 / hx, dx_.data() + off, nx);
      k.second_difference(c - 1, c, c + 1, 1.0 / (hx * hx), dxx_.data() + off, nx);
      if (two_d) {
        const double* s = c - width_;
        const double* n = c + width_;
        k.first_difference(s, n, 0.5 / hy, dy_.data() + off, nx);
        k.second_difference(s, c, n, 1.0 / (hy * hy), dyy_.data() + off, nx);
        k.second_difference(s - 1, c, n + 1, 1.0 / (hx * hy), diag_.data() + off, nx);
        k.second_difference(s + 1, c, n - 1, 1.0 / (hx * hy), anti_.data() + off, nx);
      }
    }

    double peak = 0.0;
    const bool drift = static_cast<bool>(spec_.drift);
    for (std::size_t node = 0; node < g.size(); ++node) {
      if (g.on_boundary(node)) {
        cxx_[node] = cyy_[node] = cmix_[node] = constant_[node] = 0.0;
        continue;
      }
      const double ux = dx_[node];
      const double uy = dy_[node];
      const double q = gradient_magnitude(node);
      const double a = spec_.alpha(q, u.values[node], u.time);
      const double b = spec_.beta(q, u.time);
      double coef = std::max(a, b);
      if (!two_d) {
        cxx_[node] = a;
      } else {
        double n1 = 1.0;
        double n2 = 0.0;
        const double qc = std::sqrt(ux * ux + uy * uy);
        if (qc >= spec_.grad_eps) {
          n1 = ux / qc;
          n2 = uy / qc;
        }
        const double a11 = b + (a - b) * n1 * n1;
        const double a22 = b + (a - b) * n2 * n2;
        const double a12 = (a - b) * n1 * n2;
        const double m = std::fabs(a12);
        cxx_[node] = a11 - m * hx / hy;
        cyy_[node] = a22 - m * hy / hx;
        cmix_[node] = m;
        mix_[node] = a12 >= 0.0 ? diag_[node] : anti_[node];
      }
      double c = spec_.lower_order(q, u.time);
      if (drift) {
        const std::size_t i = node % nx;
        const std::size_t j = node / nx;
        const double* p = centre(j) + i;
        double term = (east_[node] * (p[1] - p[0]) - west_[node] * (p[0] - p[-1])) / (hx * hx);
        coef += 0.5 * (std::fabs(east_[node]) + std::fabs(west_[node]));
        if (two_d) {
          const double* s = p - width_;
          const double* n = p + width_;
          term += (north_[node] * (n[0] - p[0]) - south_[node] * (p[0] - s[0])) / (hy * hy);
          coef += 0.5 * (std::fabs(north_[node]) + std::fabs(south_[node]));
        }
        c += term;
      }
      constant_[node] = c;
      peak = std::max(peak, coef);
    }
    k.combine(cxx_.data(), dxx_.data(), cyy_.data(), dyy_.data(), cmix_.data(), mix_.data(),
              constant_.data(), out.data(), g.size());
    return peak;
  }

  // Root mean square of the one-sided differences along each axis. Unlike the
  // centred gradient it does not vanish at a symmetric corner, where a
  // degenerate alpha evaluated at zero would freeze the kink in place.
  double gradient_magnitude(std::size_t node) const {
    const Grid& g = grid_;
    const std::size_t i = node % g.nx;
    const std::size_t j = node / g.nx;
    const double* p = centre(j) + i;
    const double e = (p[1] - p[0]) / g.hx;
    const double w = (p[0] - p[-1]) / g.hx;
    double q2 = 0.5 * (e * e + w * w);
    if (g.ny > 1) {
      const double n = (p[width_] - p[0]) / g.hy;
      const double s = (p[0] - p[-static_cast<std::ptrdiff_t>(width_)]) / g.hy;
      q2 += 0.5 * (n * n + s * s);
    }
    return std::sqrt(q2);
  }

  const FlowSpec& spec_;
  Grid grid_;
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> pad_;
  std::vector<double> dx_, dy_, dxx_, dyy_, diag_, anti_, mix_;
  std::vector<double> cxx_, cyy_, cmix_, constant_;
  std::vector<double> east_, west_, north_, south_;
  std::vector<double> area_, flux_, inv_volume_;
};

double timestep_from_peak(const Field& f, double peak, double safety, double dt_max) {
  const double h = f.grid.min_spacing();
  return std::min(dt_max, safety * h * h / (2.0 * cfl_dimension(f) * peak));
}

}  // namespace

double isotropic_rhs_all(const Field& field, const FlowSpec& spec, std::vector<double>& out) {
  field.validate();
  Operator op(field, spec);
  return op.apply(field, out);
}

double isotropic_rhs(const Field& field, const FlowSpec& spec, std::size_t node) {
  if (node >= field.grid.size()) throw PreconditionError("node index out of range");
  std::vector<double> out;
  isotropic_rhs_all(field, spec, out);
  return out[node];
}

double cfl_timestep(const Field& field, const FlowSpec& spec, double safety, double dt_max) {
  if (!(safety > 0.0 && safety < 1.0)) throw PreconditionError("CFL safety must lie in (0, 1)");
  std::vector<double> out;
  const double peak = isotropic_rhs_all(field, spec, out);
  if (!(peak > 0.0)) {
    throw DegenerateDiffusionError(
        "alpha = beta = 0 at every node: no explicit time step exists; treat the equation as "
        "degenerate (constant data is stationary)");
  }
  return timestep_from_peak(field, peak, safety, dt_max);
}

Trajectory evolve(const ManifoldModel& m, const FlowSpec& spec, const Field& u0, double horizon,
                  const std::vector<double>& checkpoints, const EvolveOptions& options) {
  u0.validate();
  if (!(horizon > 0.0)) throw PreconditionError("horizon must be positive");
  if (!(options.cfl_safety > 0.0 && options.cfl_safety < 1.0)) {
    throw PreconditionError("CFL safety must lie in (0, 1)");
  }
  if (!(options.dt_max > 0.0)) throw PreconditionError("dt_max must be positive");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < u0.time || checkpoints[i] > horizon) {
      throw PreconditionError("checkpoint " + std::to_string(checkpoints[i]) +
                              " outside [start, horizon]");
    }
    if (i > 0 && checkpoints[i] < checkpoints[i - 1]) {
      throw PreconditionError("checkpoints must be sorted");
    }
  }
  int n = m.dimension();
  if (options.ricci_flow) {
    if (!m.is<RoundSphere>() || u0.grid.kind != GridKind::Theta1D) {
      throw PreconditionError("the Ricci-flow variant is implemented on the round sphere only");
    }
    if (n < 2) throw PreconditionError("the Ricci-flow variant needs dimension at least 2");
    if (horizon >= 1.0 / (2.0 * (n - 1))) {
      throw PreconditionError("Ricci-flow horizon must stay below 1/(2(n-1)) where the metric collapses");
    }
  }

  const auto& k = simd::kernels();
  Field cur = u0;
  cur.manifold = m;
  auto scale_at = [&](double t) { return options.ricci_flow ? 1.0 - 2.0 * (n - 1) * t : 1.0; };
  cur.metric_scale = scale_at(cur.time);

  Operator op(cur, spec);
  const bool check_range = !spec.has_lower_order();
  double lo = 0.0;
  double hi = 0.0;
  k.min_max(cur.values.data(), cur.values.size(), &lo, &hi);

  Trajectory traj;
  std::vector<double> rhs;
  for (double target : checkpoints) {
    while (cur.time < target) {
      const double peak = op.apply(cur, rhs);
      if (!(peak > 0.0)) {
        if (!op.stationary_if_degenerate()) {
          throw DegenerateDiffusionError("diffusion vanishes everywhere but lower-order terms remain");
        }
        cur.time = target;  // every term is zero: the field is stationary
        break;
      }
      double dt = timestep_from_peak(cur, peak, options.cfl_safety, options.dt_max);
      traj.max_dt = std::max(traj.max_dt, dt);
      const bool last = cur.time + dt >= target;
      if (last) dt = target - cur.time;
      k.axpy(cur.values.data(), rhs.data(), dt, rhs.size());
      cur.time = last ? target : cur.time + dt;
      cur.metric_scale = scale_at(cur.time);
      ++traj.steps;
      if (check_range) {
        double nlo = 0.0;
        double nhi = 0.0;
        k.min_max(cur.values.data(), cur.values.size(), &nlo, &nhi);
        if (nhi > hi + options.range_tol || nlo < lo - options.range_tol) {
          throw StabilityError("range expanded at t = " + std::to_string(cur.time) +
                               " (CFL violation or non-monotone stencil): [" +
                               std::to_string(nlo) + ", " + std::to_string(nhi) + "] vs [" +
                               std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        lo = nlo;
        hi = nhi;
      }
    }
    traj.fields.push_back(cur);
  }
  return traj;
}

double conserved_mean(const Field& field, const FlowSpec& spec) {
  const Grid& g = field.grid;
  double num = 0.0;
  double den = 0.0;
  if (g.kind == GridKind::Theta1D) {
    const int dim = field.manifold.dimension();
    for (std::size_t j = 0; j < g.nx; ++j) {
      const double a = static_cast<double>(j) * g.hx;
      const double v = sin_power_integral(dim - 1, a, a + g.hx);
      num += v * field.values[j];
      den += v;
    }
    return num / den;
  }
  for (std::size_t node = 0; node < g.size(); ++node) {
    const double w = spec.drift ? std::exp(-spec.drift->value(g.point(node))) : 1.0;
    num += w * field.values[node];
    den += w;
  }
  return num / den;
}

}  // namespace moclab
