#pragma once

#include <cstddef>
#include <vector>

#include "moclab/flow.hpp"
#include "moclab/modulus.hpp"

namespace moclab {

enum class DriftKind { NoDrift, CKappa, BakryEmery, RicciRescaled };

/// Drift of the one-dimensional comparison equation.
///   NoDrift:       phi_t = alpha phi''
///   CKappa:        phi_t = alpha phi'' + (n-1) c_k'/c_k (s) beta phi'
///   BakryEmery:    phi_t = alpha phi'' - a s phi'
///   RicciRescaled: in sigma = s / sqrt(lambda),
///                  phi_t = alpha(|phi'| / sqrt(lambda)) phi'' / lambda + (lambda' / 2 lambda) sigma phi'
///                  with lambda(t) = 1 - 2(n-1)t.
struct Drift {
  DriftKind kind = DriftKind::NoDrift;
  double kappa = 0.0;
  int dimension = 1;
  double a = 0.0;

  static Drift none() { return {}; }
  static Drift c_kappa(double kappa, int n) { return {DriftKind::CKappa, kappa, n, 0.0}; }
  static Drift bakry_emery(double a) { return {DriftKind::BakryEmery, 0.0, 1, a}; }
  static Drift ricci_rescaled(int n) { return {DriftKind::RicciRescaled, 0.0, n, 0.0}; }
};

const char* to_string(DriftKind kind);

enum class RightBoundary { NeumannZero, PoleGuarded };

struct ComparisonProfile {
  /// Cell-centred s_j = (j + 1/2) h on (0, s_max) for comparison profiles;
  /// node grid z_j = j h on [0, D] for height profiles.
  std::vector<double> s_grid;
  double h = 0.0;
  bool node_centred = false;
  /// Dirichlet phi(0) = left_bc when true, zero flux otherwise.
  bool left_dirichlet = true;
  double left_bc = 0.0;
  RightBoundary right_bc = RightBoundary::NeumannZero;
  Drift drift;
  double epsilon_lift = 0.0;
  std::vector<double> initial;
  std::vector<double> times;
  std::vector<std::vector<double>> values_by_time;
  double max_dt = 0.0;

  /// phi at checkpoint k, linearly interpolated at physical distance s. For the
  /// Ricci-rescaled drift, s is mapped to sigma = s / sqrt(lambda(t_k)).
  double value(std::size_t k, double s) const;
};

/// Cell-centred grid of `cells` nodes on (0, s_max].
std::vector<double> make_s_grid(double s_max, std::size_t cells);

/// Piecewise-linear interpolant through (0, 0) and the nonempty bins of the
/// envelope, held constant past the last nonempty bin, plus epsilon.
std::vector<double> build_supersolution_initial(const ModulusCurve& w0, double epsilon,
                                                const std::vector<double>& s_grid);

/// Profile on a cell-centred grid of `cells` nodes over (0, s_max], lifted
/// from w0 by epsilon, ready for solve_comparison.
ComparisonProfile make_comparison_profile(const ModulusCurve& w0, double epsilon, double s_max,
                                          std::size_t cells, const Drift& drift);

struct ComparisonOptions {
  double cfl_safety = 0.5;
  double dt_max = 1e-3;
  double monotone_tol = 1e-10;
};

ComparisonProfile solve_comparison(const ComparisonProfile& profile, const FlowSpec& spec,
                                   double horizon, const std::vector<double>& checkpoints,
                                   const ComparisonOptions& options = {});

struct CheckpointDiagnostic {
  double time = 0.0;
  double max_margin = 0.0;  // max over nonempty bins of (w_hat - phi)
  double argmax_s = 0.0;
  std::size_t nonempty_bins = 0;
};

struct ComparisonCheck {
  double max_violation = 0.0;
  std::vector<CheckpointDiagnostic> per_time;
};

/// Curves must carry the increasing envelope and match the profile times.
ComparisonCheck check_comparison(const std::vector<ModulusCurve>& w, const ComparisonProfile& phi);

/// Neumann profile phi_t = alpha(|phi'|, phi, t) phi'' on the node grid over [0, D].
ComparisonProfile solve_height_profile(const FlowSpec& spec, double diameter,
                                       const std::vector<double>& phi0, double horizon,
                                       const std::vector<double>& checkpoints,
                                       const ComparisonOptions& options = {});

/// Inverse of a nondecreasing table. Plateaus map to their leftmost point;
/// queries outside [phi(0), phi(D)] clamp to the end points.
class MonotoneInverse {
 public:
  MonotoneInverse(std::vector<double> z, std::vector<double> phi);
  double operator()(double r) const;

 private:
  std::vector<double> z_;
  std::vector<double> phi_;
};

MonotoneInverse invert_profile(const std::vector<double>& z, const std::vector<double>& phi);

}  // namespace moclab
