#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "moclab/geometry.hpp"

namespace moclab {

enum class FlowPreset { Heat, GraphicalMCF, PLaplacian, Custom };

std::string to_string(FlowPreset preset);

/// Scalar potential f of the drift Laplacian Delta_f = Delta - <grad f, grad .>.
/// Supplied analytically; the solver also samples f at staggered faces.
struct DriftPotential {
  std::function<double(Point)> value;
  std::function<std::array<double, 2>(Point)> gradient;
  /// (f_xx, f_xy, f_yy)
  std::function<std::array<double, 3>(Point)> hessian;
  std::string description;
};

/// f(x, y) = amplitude * cos(2 pi k x / period)
DriftPotential cosine_potential(double amplitude, double period, int wavenumber = 1);

/// Coefficients of the isotropic flow
///   u_t = [alpha nu nu^T + beta (I - nu nu^T)] : D^2 u + b,   nu = Du / |Du|.
struct FlowSpec {
  /// alpha(q, u, t); the u argument only matters for height-dependent flows.
  std::function<double(double q, double u, double t)> alpha;
  std::function<double(double q, double t)> beta;
  /// Lower-order term b(q, t); empty means b = 0.
  std::function<double(double q, double t)> b;
  std::optional<DriftPotential> drift;
  double grad_eps = 1e-8;
  FlowPreset preset = FlowPreset::Custom;
  double p = 0.0;
  /// False when beta depends on t only (height-bound flows require this).
  bool beta_uses_gradient = true;

  static FlowSpec heat();
  static FlowSpec graphical_mcf();
  /// Requires p > 2.
  static FlowSpec p_laplacian(double p);

  bool has_lower_order() const { return static_cast<bool>(b); }
  double lower_order(double q, double t) const { return b ? b(q, t) : 0.0; }
};

}  // namespace moclab
