#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "moclab/field.hpp"
#include "moclab/flow.hpp"

namespace moclab {

enum class Theorem { Main, RicciFlow, HeightBound, BakryEmery, Neumann, Dirichlet, AlphaAdmissible };

std::string to_string(Theorem t);
std::optional<Theorem> theorem_from_string(std::string_view s);
/// Accepted spellings, in declaration order.
const std::vector<std::string>& theorem_tags();

enum class InitialKind { Constant, Eigenfunction, Bandlimited, Terms, Custom };

std::string to_string(InitialKind k);

/// One separable term amplitude * f(mode_x) * g(mode_y). The mode number maps
/// to the argument 2 pi k x / L on periodic models and pi k x / L on domains
/// and on the sphere (L = pi there).
struct Term {
  double amplitude = 0.0;
  std::string fx = "one";  // sin | cos | one
  double kx = 0.0;
  std::string fy = "one";
  double ky = 0.0;
};

/// Parses "amp:f:kx:g:ky"; throws PreconditionError on malformed input.
Term parse_term(std::string_view text);
std::string format_term(const Term& t);

struct InitialProfile {
  InitialKind kind = InitialKind::Eigenfunction;
  double value = 0.0;      // Constant
  double amplitude = 1.0;  // Eigenfunction scale; Bandlimited l1 norm of coefficients
  int modes = 2;
  std::uint64_t seed = 0;
  std::vector<Term> terms;
  std::function<double(Point)> custom;

  static InitialProfile constant(double c);
  static InitialProfile eigenfunction(double amplitude = 1.0);
  static InitialProfile bandlimited(std::uint64_t seed, int modes, double amplitude);
  static InitialProfile from_terms(std::vector<Term> terms);
};

/// u0 as a function on the chart of m.
std::function<double(Point)> initial_function(const ManifoldModel& m, const InitialProfile& p);

/// Supplied Dirichlet supersolution phi(s, t).
struct Supersolution {
  std::string kind = "linear";  // linear | power
  double slope = 1.0;
  double coefficient = 1.0;
  double exponent = 1.0;
  std::function<double(double s, double t)> custom;

  double operator()(double s, double t) const;
  std::string describe() const;
};

struct ScenarioSpec {
  std::string id;
  Theorem theorem = Theorem::Main;
  ManifoldModel manifold = ManifoldModel::circle(6.283185307179586);
  FlowSpec flow = FlowSpec::heat();
  InitialProfile u0;
  double horizon = 0.5;
  std::vector<double> checkpoints{0.5};
  std::size_t grid = 64;
  std::size_t grid_y = 0;  // 0: same as grid
  std::size_t bins = 0;    // 0: aligned default
  std::size_t profile_cells = 0;  // 0: same as bins
  std::size_t phi_samples = 256;
  std::uint64_t pair_budget = 50'000'000;
  std::uint64_t seed = 0;
  double epsilon = 1e-3;
  double cfl_safety = 0.5;
  double dt_max = 1e-3;
  double max_empty_fraction = 0.5;
  // Height bound.
  double delta_g = 0.05;
  std::size_t height_cells = 400;
  // Dirichlet.
  Supersolution phi;
  // Alpha admissibility.
  std::size_t samples = 10000;
  int alpha_dimension = 3;
  bool spot_test = false;
  std::size_t workers = 1;

  /// Checks the documented invariants; throws PreconditionError.
  void validate() const;
  /// {0} followed by the checkpoints, without duplicating 0.
  std::vector<double> times_with_start() const;
  /// Bin count actually used (aligned with the grid when bins == 0).
  std::size_t effective_bins() const;
};

}  // namespace moclab
