#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "moclab/field.hpp"

namespace moclab {

/// Binned empirical modulus w(s) = sup{(u(y) - u(x)) / 2 : d(x, y) = 2s}.
/// Pair (x, y) feeds bin j iff |d(x, y) - 2 s_j| <= bin_halfwidth.
struct ModulusCurve {
  std::vector<double> bin_centers;
  std::vector<double> values;
  std::vector<bool> nonempty;
  double bin_halfwidth = 0.0;
  double time = 0.0;
  bool envelope_applied = false;
  std::uint64_t pairs = 0;
  bool exhaustive = true;
  std::uint64_t seed = 0;

  std::size_t size() const { return values.size(); }
  std::size_t empty_count() const;
};

struct ModulusOptions {
  std::size_t bins = 64;
  std::uint64_t pair_budget = 50'000'000;
  std::uint64_t seed = 0;
  /// Number of azimuth differences in [0, pi] on the axisymmetric sphere.
  std::size_t phi_samples = 256;
  /// 0 selects the default (D/2) / (2 bins).
  double bin_halfwidth = 0.0;
  double max_empty_fraction = 0.5;
  std::size_t workers = 1;
};

/// Bins cover (0, D/2] where D is the diameter of the (possibly rescaled)
/// metric: s_j = (j + 1/2) D / (2 bins).
ModulusCurve extract_modulus(const Field& field, const ModulusOptions& options);

ModulusCurve extract_modulus(const Field& field, std::size_t bins, std::uint64_t pair_budget,
                             std::uint64_t seed);

/// Running maximum of the values.
ModulusCurve increasing_envelope(const ModulusCurve& c);

struct LagMaximum {
  double distance;
  double max_abs_diff;  // over all node pairs with this displacement
};

/// Every pair displacement of a periodic or domain grid with its distance and
/// the largest |u(y) - u(x)|; together these cover all node pairs.
std::vector<LagMaximum> lag_maxima(const Field& field);

/// (max u - min u) / 2
double oscillation(const Field& field);

}  // namespace moclab
