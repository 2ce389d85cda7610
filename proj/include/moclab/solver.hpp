#pragma once

#include <cstddef>
#include <vector>

#include "moclab/field.hpp"
#include "moclab/flow.hpp"

namespace moclab {

struct EvolveOptions {
  double cfl_safety = 0.5;
  double dt_max = 1e-3;
  /// Shrinking round-sphere metric g(t) = (1 - 2(n-1)t) g(0).
  bool ricci_flow = false;
  /// Allowed per-step growth of max u (or decay of min u) when b = 0.
  double range_tol = 1e-12;
};

struct Trajectory {
  std::vector<Field> fields;  // one per checkpoint
  double max_dt = 0.0;
  std::size_t steps = 0;
};

/// Discrete right-hand side at every node, written to out. Returns the largest
/// max(alpha, beta) / lambda over the updated nodes (the CFL coefficient).
/// Dirichlet boundary nodes get 0.
double isotropic_rhs_all(const Field& field, const FlowSpec& spec, std::vector<double>& out);

/// Right-hand side at a single node.
double isotropic_rhs(const Field& field, const FlowSpec& spec, std::size_t node);

/// safety * h_min^2 / (2 dim max(alpha, beta)), capped by dt_max. dim is the
/// grid dimension except on the axisymmetric sphere, where the pole cells
/// behave like an n-dimensional stencil and dim = n.
double cfl_timestep(const Field& field, const FlowSpec& spec, double safety, double dt_max = 1e-3);

/// Forward Euler from u0.time to each checkpoint.
Trajectory evolve(const ManifoldModel& m, const FlowSpec& spec, const Field& u0, double horizon,
                  const std::vector<double>& checkpoints, const EvolveOptions& options = {});

/// Weighted grid mean: plain mean on flat grids, cell-volume weighted on the
/// sphere, e^{-f} weighted when the flow has a drift potential.
double conserved_mean(const Field& field, const FlowSpec& spec);

}  // namespace moclab
