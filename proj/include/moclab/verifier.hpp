#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "moclab/modulus.hpp"
#include "moclab/scenario.hpp"

namespace moclab {

enum class Status { Pass, Violation, HypothesisNotMet };

std::string to_string(Status s);

/// epsilon/2 + c1 * delta_bin + c2 * h + c3 * dt + floor
struct ToleranceBudget {
  double epsilon = 0.0;
  double c1 = 0.0;
  double delta_bin = 0.0;
  double c2 = 0.0;
  double h = 0.0;
  double c3 = 0.0;
  double dt = 0.0;
  double floor = 0.0;

  double total() const { return epsilon / 2.0 + c1 * delta_bin + c2 * h + c3 * dt + floor; }
  bool operator==(const ToleranceBudget&) const = default;
};

struct CheckpointRow {
  double time = 0.0;
  double max_margin = 0.0;
  double argmax_s = 0.0;
  std::size_t nonempty_bins = 0;
  double oscillation = 0.0;
  bool operator==(const CheckpointRow&) const = default;
};

struct Provenance {
  std::uint64_t seed = 0;
  std::size_t grid_x = 0;
  std::size_t grid_y = 0;
  std::size_t bins = 0;
  std::size_t profile_cells = 0;
  std::size_t phi_samples = 0;
  std::uint64_t pair_budget = 0;
  std::uint64_t pairs = 0;
  bool pairs_exhaustive = true;
  double h = 0.0;
  double bin_halfwidth = 0.0;
  double cfl_safety = 0.0;
  double dt_max = 0.0;
  double max_dt = 0.0;
  double profile_max_dt = 0.0;
  std::uint64_t steps = 0;
  bool operator==(const Provenance&) const = default;
};

struct VerificationReport {
  std::string scenario_id;
  Theorem theorem = Theorem::Main;
  Status status = Status::Pass;
  double max_violation = 0.0;
  double tolerance_budget = 0.0;
  ToleranceBudget budget;
  bool pass = false;
  std::vector<CheckpointRow> checkpoints;
  Provenance provenance;
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;

  /// Sets tolerance_budget from budget and pass from the two numbers.
  void finalize();
  bool operator==(const VerificationReport&) const = default;
};

struct ComparisonRow {
  double time = 0.0;
  double s = 0.0;
  double phi = 0.0;
  double w_envelope = 0.0;
  double margin = 0.0;
};

struct Outcome {
  VerificationReport report;
  std::vector<ModulusCurve> raw;
  std::vector<ModulusCurve> envelope;
  std::vector<ComparisonRow> comparison;
};

Outcome verify_main_estimate(const ScenarioSpec& sc);
Outcome verify_ricci_flow(const ScenarioSpec& sc);
Outcome verify_height_bound(const ScenarioSpec& sc);
Outcome verify_bakry_emery(const ScenarioSpec& sc);
Outcome verify_neumann(const ScenarioSpec& sc);
Outcome verify_dirichlet(const ScenarioSpec& sc, const Supersolution& phi);
Outcome verify_alpha_admissible(const ScenarioSpec& sc);

/// Dispatches on sc.theorem.
Outcome verify(const ScenarioSpec& sc);

/// Row-major dim x dim matrix A(p, t).
using DiffusionMatrix = std::function<std::vector<double>(const std::vector<double>& p, double t)>;

/// A(p, t) = beta I + (alpha - beta) p p^T / |p|^2 with alpha, beta taken at q = |p|.
DiffusionMatrix isotropic_matrix(const FlowSpec& flow, int dim);

struct AdmissibilityResult {
  bool pass = false;
  /// min over samples of R^2 v^T A v / ((v.p)^2 alpha(R))
  double worst_ratio = 0.0;
  /// max over samples of (alpha - R^2 v^T A v / (v.p)^2) / max(1, alpha)
  double max_defect = 0.0;
  std::size_t samples = 0;
};

constexpr double kAdmissibilityTolerance = 1e-12;

/// Random (R, p/|p|, v) triples plus the probe v = p for each triple.
AdmissibilityResult alpha_admissible(const DiffusionMatrix& a,
                                     const std::function<double(double r, double t)>& alpha,
                                     std::size_t samples, std::uint64_t seed, int dim = 3);

/// Smallest eigenvalue of Ric + Hess f over the grid nodes (Ric = 0 on flat models).
double bakry_emery_constant(const ManifoldModel& m, const Grid& g, const DriftPotential& f);

}  // namespace moclab
