#include "moclab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "moclab/errors.hpp"

namespace moclab {
namespace {

constexpr double kChartSlack = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw PreconditionError(std::string(what) + " must be positive and finite");
  }
}

void require_range(double v, double lo, double hi, const char* what) {
  if (!(v >= lo - kChartSlack && v <= hi + kChartSlack)) {
    throw PreconditionError(std::string("coordinate ") + what + " = " + std::to_string(v) +
                            " outside chart range [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
  }
}

double periodic_gap(double a, double b, double period) {
  const double d = std::fabs(a - b);
  return std::min(d, period - d);
}

}  // namespace

ManifoldModel ManifoldModel::circle(double circumference) {
  require_positive(circumference, "circumference");
  return {Circle{circumference}, Boundary::Closed};
}

ManifoldModel ManifoldModel::flat_torus(double length_x, double length_y) {
  require_positive(length_x, "torus side length");
  require_positive(length_y, "torus side length");
  return {FlatTorus{length_x, length_y}, Boundary::Closed};
}

ManifoldModel ManifoldModel::round_sphere(int dimension) {
  if (dimension < 1) throw PreconditionError("sphere dimension must be at least 1");
  return {RoundSphere{dimension}, Boundary::Closed};
}

ManifoldModel ManifoldModel::interval(double length, Boundary boundary) {
  require_positive(length, "interval length");
  if (boundary == Boundary::Closed) throw PreconditionError("an interval needs a boundary condition");
  return {Interval{length}, boundary};
}

ManifoldModel ManifoldModel::rectangle(double length_x, double length_y, Boundary boundary) {
  require_positive(length_x, "rectangle side length");
  require_positive(length_y, "rectangle side length");
  if (boundary == Boundary::Closed) throw PreconditionError("a rectangle needs a boundary condition");
  return {Rectangle{length_x, length_y}, boundary};
}

int ManifoldModel::dimension() const {
  return std::visit(Overloaded{
                        [](const Circle&) { return 1; },
                        [](const FlatTorus&) { return 2; },
                        [](const RoundSphere& s) { return s.dimension; },
                        [](const Interval&) { return 1; },
                        [](const Rectangle&) { return 2; },
                    },
                    shape_);
}

double ManifoldModel::diameter() const {
  return std::visit(Overloaded{
                        [](const Circle& c) { return c.circumference / 2.0; },
                        [](const FlatTorus& t) { return std::hypot(t.length_x, t.length_y) / 2.0; },
                        [](const RoundSphere&) { return std::numbers::pi; },
                        [](const Interval& i) { return i.length; },
                        [](const Rectangle& r) { return std::hypot(r.length_x, r.length_y); },
                    },
                    shape_);
}

double ManifoldModel::ricci_lower() const { return is<RoundSphere>() ? 1.0 : 0.0; }

ManifoldConstants manifold_constants(const ManifoldModel& m) {
  return {m.dimension(), m.diameter(), m.ricci_lower()};
}

double c_kappa(double kappa, double t) {
  if (kappa > 0.0) return std::cos(std::sqrt(kappa) * t);
  if (kappa < 0.0) return std::cosh(std::sqrt(-kappa) * t);
  return 1.0;
}

double c_kappa_derivative(double kappa, double t) {
  if (kappa > 0.0) {
    const double r = std::sqrt(kappa);
    return -r * std::sin(r * t);
  }
  if (kappa < 0.0) {
    const double r = std::sqrt(-kappa);
    return r * std::sinh(r * t);
  }
  return 0.0;
}

double drift_coefficient(double kappa, int n, double s, double poletol) {
  if (kappa == 0.0) return 0.0;
  const double r = std::sqrt(std::fabs(kappa));
  if (kappa > 0.0) {
    const double pole = std::numbers::pi / (2.0 * r);
    if (s >= pole - poletol) {
      throw PoleError("drift coefficient evaluated at s = " + std::to_string(s) +
                      ", within " + std::to_string(poletol) + " of the pole " +
                      std::to_string(pole));
    }
    return -(n - 1) * r * std::tan(r * s);
  }
  return (n - 1) * r * std::tanh(r * s);
}

double geodesic_distance(const ManifoldModel& m, Point a, Point b) {
  return std::visit(
      Overloaded{
          [&](const Circle& c) {
            require_range(a.x, 0.0, c.circumference, "x");
            require_range(b.x, 0.0, c.circumference, "x");
            return periodic_gap(a.x, b.x, c.circumference);
          },
          [&](const FlatTorus& t) {
            require_range(a.x, 0.0, t.length_x, "x");
            require_range(b.x, 0.0, t.length_x, "x");
            require_range(a.y, 0.0, t.length_y, "y");
            require_range(b.y, 0.0, t.length_y, "y");
            // Minimum over the 9 nearest lattice translates.
            double best = INFINITY;
            for (int i = -1; i <= 1; ++i) {
              for (int j = -1; j <= 1; ++j) {
                const double dx = b.x - a.x + i * t.length_x;
                const double dy = b.y - a.y + j * t.length_y;
                best = std::min(best, std::hypot(dx, dy));
              }
            }
            return best;
          },
          [&](const RoundSphere&) {
            const double pi = std::numbers::pi;
            require_range(a.x, 0.0, pi, "theta");
            require_range(b.x, 0.0, pi, "theta");
            require_range(a.y, -2.0 * pi, 2.0 * pi, "phi");
            require_range(b.y, -2.0 * pi, 2.0 * pi, "phi");
            // Central angle from embedded unit vectors, atan2 form.
            const double ax = std::sin(a.x) * std::cos(a.y), ay = std::sin(a.x) * std::sin(a.y),
                         az = std::cos(a.x);
            const double bx = std::sin(b.x) * std::cos(b.y), by = std::sin(b.x) * std::sin(b.y),
                         bz = std::cos(b.x);
            const double cx = ay * bz - az * by, cy = az * bx - ax * bz, cz = ax * by - ay * bx;
            const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
            const double dot = ax * bx + ay * by + az * bz;
            return std::atan2(cross, dot);
          },
          [&](const Interval& i) {
            require_range(a.x, 0.0, i.length, "x");
            require_range(b.x, 0.0, i.length, "x");
            return std::fabs(a.x - b.x);
          },
          [&](const Rectangle& r) {
            require_range(a.x, 0.0, r.length_x, "x");
            require_range(b.x, 0.0, r.length_x, "x");
            require_range(a.y, 0.0, r.length_y, "y");
            require_range(b.y, 0.0, r.length_y, "y");
            return std::hypot(a.x - b.x, a.y - b.y);
          },
      },
      m.shape());
}

}  // namespace moclab
