#pragma once

// Closed-form model manifolds: exact distance, diameter and Ricci lower bound,
// plus the c_kappa family that enters the one-dimensional comparison equation.

#include <variant>

namespace moclab {

struct Circle {
  double circumference;
};
struct FlatTorus {
  double length_x;
  double length_y;
};
/// Unit round sphere S^n, points in axisymmetric chart (theta, phi).
struct RoundSphere {
  int dimension;
};
struct Interval {
  double length;
};
struct Rectangle {
  double length_x;
  double length_y;
};

using ManifoldShape = std::variant<Circle, FlatTorus, RoundSphere, Interval, Rectangle>;

enum class Boundary { Closed, NeumannDomain, DirichletDomain };

/// Chart coordinates. Circle/Interval use x only; FlatTorus/Rectangle use
/// (x, y); RoundSphere uses (theta, phi).
struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct ManifoldConstants {
  int dimension;
  double diameter;
  double ricci_lower;  // kappa with Ric >= (n-1) kappa g
};

class ManifoldModel {
 public:
  static ManifoldModel circle(double circumference);
  static ManifoldModel flat_torus(double length_x, double length_y);
  static ManifoldModel round_sphere(int dimension);
  static ManifoldModel interval(double length, Boundary boundary);
  static ManifoldModel rectangle(double length_x, double length_y, Boundary boundary);

  const ManifoldShape& shape() const { return shape_; }
  Boundary boundary() const { return boundary_; }
  bool closed() const { return boundary_ == Boundary::Closed; }

  int dimension() const;
  double diameter() const;
  double ricci_lower() const;

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(shape_);
  }

 private:
  ManifoldModel(ManifoldShape shape, Boundary boundary) : shape_(shape), boundary_(boundary) {}

  ManifoldShape shape_;
  Boundary boundary_;
};

ManifoldConstants manifold_constants(const ManifoldModel& m);

/// cos(sqrt(k) t) for k > 0, 1 for k == 0, cosh(sqrt(|k|) t) for k < 0.
double c_kappa(double kappa, double t);

/// Derivative of c_kappa with respect to t.
double c_kappa_derivative(double kappa, double t);

/// (n-1) c_kappa'(s) / c_kappa(s).
///
/// For kappa > 0 the ratio has a pole at pi / (2 sqrt(kappa)); a PoleError is
/// thrown when s >= pole - poletol.
double drift_coefficient(double kappa, int n, double s, double poletol = 0.0);

/// Exact intrinsic distance. Throws PreconditionError for coordinates outside
/// the chart.
double geodesic_distance(const ManifoldModel& m, Point a, Point b);

}  // namespace moclab
