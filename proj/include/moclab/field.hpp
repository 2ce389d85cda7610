#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "moclab/geometry.hpp"

namespace moclab {

enum class GridKind {
  Theta1D,   // axisymmetric sphere, cell-centred theta_j = (j + 1/2) h on (0, pi)
  Periodic,  // circle (ny == 1) or flat torus, nodes x_i = i h
  Domain,    // interval (ny == 1) or rectangle
};

enum class BoundaryFlavor { None, Neumann, Dirichlet };

/// Structured grid. Neumann domains are cell-centred (mirror ghosts across the
/// faces); Dirichlet domains are node-centred with pinned boundary nodes.
struct Grid {
  GridKind kind = GridKind::Periodic;
  std::size_t nx = 0;
  std::size_t ny = 1;
  double hx = 0.0;
  double hy = 0.0;
  BoundaryFlavor flavor = BoundaryFlavor::None;

  static Grid theta(std::size_t cells);
  static Grid periodic(double length_x, std::size_t nx, double length_y = 0.0, std::size_t ny = 1);
  static Grid domain(BoundaryFlavor flavor, double length_x, std::size_t nx, double length_y = 0.0,
                     std::size_t ny = 1);

  std::size_t size() const { return nx * ny; }
  int dimension() const { return ny > 1 ? 2 : 1; }
  double min_spacing() const { return ny > 1 ? (hx < hy ? hx : hy) : hx; }
  std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }

  double x(std::size_t i) const;
  double y(std::size_t j) const;
  Point point(std::size_t node) const;
  bool on_boundary(std::size_t node) const;
};

/// Grid of the natural type for a manifold. ny is ignored for 1-D models and
/// defaults to nx for 2-D ones.
Grid make_grid(const ManifoldModel& m, std::size_t nx, std::size_t ny = 0);

struct Field {
  ManifoldModel manifold;
  Grid grid;
  std::vector<double> values;
  double time = 0.0;
  /// lambda(t) of a shrinking metric g(t) = lambda(t) g(0); 1 otherwise.
  double metric_scale = 1.0;

  /// Samples f at every node. Dirichlet boundary nodes are set to exactly 0.
  static Field sample(const ManifoldModel& m, const Grid& g, const std::function<double(Point)>& f);

  /// Throws PreconditionError when the invariants (finite values, matching
  /// length, zero Dirichlet boundary, metric scale in (0, 1]) fail.
  void validate() const;
};

}  // namespace moclab
