#include "moclab/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <utility>

#include "moclab/errors.hpp"
#include "moclab/simd/kernels.hpp"

namespace moclab {
namespace {

struct Binning {
  std::size_t count = 0;
  double spacing = 0.0;  // distance between consecutive 2 s_j
  double halfwidth = 0.0;

  double target(std::size_t j) const { return (static_cast<double>(j) + 0.5) * spacing; }

  // Bins [first, last) whose band |d - 2 s_j| <= halfwidth contains d. Usually
  // at most one; wide custom bands overlap.
  std::pair<std::size_t, std::size_t> locate(double d) const {
    const double lo = std::max(0.0, std::ceil((d - halfwidth) / spacing - 0.5));
    const double hi = std::min(static_cast<double>(count) - 1.0, std::floor((d + halfwidth) / spacing - 0.5));
    if (hi < lo) return {0, 0};
    auto first = static_cast<std::size_t>(lo);
    auto last = static_cast<std::size_t>(hi) + 1;
    // The rounding above can be off by one ulp at band edges; settle with the exact test.
    while (first < last && std::fabs(d - target(first)) > halfwidth) ++first;
    while (last > first && std::fabs(d - target(last - 1)) > halfwidth) --last;
    if (first > 0 && std::fabs(d - target(first - 1)) <= halfwidth) --first;
    if (last < count && std::fabs(d - target(last)) <= halfwidth) ++last;
    return {first, last};
  }
};

struct Accumulator {
  std::vector<double> best;
  std::vector<char> hit;

  explicit Accumulator(std::size_t bins) : best(bins, 0.0), hit(bins, 0) {}

  void add(std::size_t j, double v) {
    hit[j] = 1;
    if (v > best[j]) best[j] = v;
  }

  void add(std::pair<std::size_t, std::size_t> range, double v) {
    for (std::size_t j = range.first; j < range.second; ++j) add(j, v);
  }

  void merge(const Accumulator& o) {
    for (std::size_t j = 0; j < best.size(); ++j) {
      best[j] = std::max(best[j], o.best[j]);
      hit[j] = static_cast<char>(hit[j] | o.hit[j]);
    }
  }
};

// Runs body(task, acc) for every task index, split round-robin over workers,
// and max-reduces the private accumulators.
template <class Body>
Accumulator parallel_tasks(std::size_t tasks, std::size_t bins, std::size_t workers, Body body) {
  workers = std::max<std::size_t>(1, std::min(workers, tasks));
  std::vector<Accumulator> accs(workers, Accumulator(bins));
  auto run = [&](std::size_t w) {
    for (std::size_t t = w; t < tasks; t += workers) body(t, accs[w]);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  for (std::size_t w = 1; w < workers; ++w) accs[0].merge(accs[w]);
  return std::move(accs[0]);
}

// Pair displacements on flat grids. Periodic grids use every cyclic lag
// (a, b); domain grids use a in (-nx, nx), b in [0, ny) without the mirror
// half of b == 0.
std::size_t lag_count(const Grid& g) {
  return g.kind == GridKind::Periodic ? g.nx * g.ny : (2 * g.nx - 1) * g.ny;
}

// Distance of lag `task`, negative for the skipped mirror lags.
double lag_distance(const Grid& g, std::size_t task) {
  if (g.kind == GridKind::Periodic) {
    const std::size_t a = task % g.nx;
    const std::size_t b = task / g.nx;
    const double dx = static_cast<double>(std::min(a, g.nx - a)) * g.hx;
    const double dy = static_cast<double>(std::min(b, g.ny - b)) * g.hy;
    return std::sqrt(dx * dx + dy * dy);
  }
  const std::size_t span = 2 * g.nx - 1;
  const long a = static_cast<long>(task % span) - static_cast<long>(g.nx - 1);
  const std::size_t b = task / span;
  if (b == 0 && a < 0) return -1.0;
  const double dx = static_cast<double>(std::labs(a)) * g.hx;
  const double dy = static_cast<double>(b) * g.hy;
  return std::sqrt(dx * dx + dy * dy);
}

// max |u(y) - u(x)| over node pairs separated by lag `task`.
double lag_max(const Field& f, std::size_t task) {
  const auto& k = simd::kernels();
  const Grid& g = f.grid;
  const std::size_t nx = g.nx;
  const std::size_t ny = g.ny;
  const double* u = f.values.data();
  double m = 0.0;
  if (g.kind == GridKind::Periodic) {
    const std::size_t a = task % nx;
    const std::size_t b = task / nx;
    for (std::size_t row = 0; row < ny; ++row) {
      const double* r0 = u + row * nx;
      const double* r1 = u + ((row + b) % ny) * nx;
      m = std::max(m, k.max_abs_diff(r0, r1 + a, nx - a));
      if (a > 0) m = std::max(m, k.max_abs_diff(r0 + nx - a, r1, a));
    }
    return m;
  }
  const std::size_t span = 2 * nx - 1;
  const long a = static_cast<long>(task % span) - static_cast<long>(nx - 1);
  const std::size_t b = task / span;
  const std::size_t abs_a = static_cast<std::size_t>(std::labs(a));
  for (std::size_t row = 0; row + b < ny; ++row) {
    const double* r0 = u + row * nx;
    const double* r1 = u + (row + b) * nx;
    if (a >= 0) {
      m = std::max(m, k.max_abs_diff(r0, r1 + abs_a, nx - abs_a));
    } else {
      m = std::max(m, k.max_abs_diff(r0 + abs_a, r1, nx - abs_a));
    }
  }
  return m;
}

Accumulator flat_lags(const Field& f, const Binning& bins, double root, std::size_t workers) {
  return parallel_tasks(lag_count(f.grid), bins.count, workers,
                        [&](std::size_t task, Accumulator& acc) {
                          const double d = lag_distance(f.grid, task);
                          if (d < 0.0) return;
                          const auto range = bins.locate(root * d);
                          if (range.first == range.second) return;
                          acc.add(range, 0.5 * lag_max(f, task));
                        });
}

// Axisymmetric sphere: for the pair (theta_i, theta_k) the distance grows with
// the azimuth difference, so the bins it reaches are found by a merge walk of
// cos d against per-bin cosine thresholds.
Accumulator sphere_pairs(const Field& f, const Binning& bins, double root, std::size_t phi_samples,
                         std::size_t workers) {
  const auto& k = simd::kernels();
  const Grid& g = f.grid;
  const std::size_t n = g.nx;
  const double pi = std::numbers::pi;
  std::vector<double> cos_phi(phi_samples);
  for (std::size_t p = 0; p < phi_samples; ++p) {
    cos_phi[p] = std::cos(pi * static_cast<double>(p) / static_cast<double>(phi_samples - 1));
  }
  // Band j in unscaled distance: [lo_j, hi_j]; in cosine space: [cos hi_j, cos lo_j].
  std::vector<double> cos_upper(bins.count);
  std::vector<double> cos_lower(bins.count);
  for (std::size_t j = 0; j < bins.count; ++j) {
    const double lo = std::max(0.0, (bins.target(j) - bins.halfwidth) / root);
    const double hi = std::min(pi, (bins.target(j) + bins.halfwidth) / root);
    cos_upper[j] = std::cos(lo);
    cos_lower[j] = std::cos(hi);
  }
  std::vector<double> ct(n);
  std::vector<double> st(n);
  for (std::size_t i = 0; i < n; ++i) {
    ct[i] = std::cos(g.x(i));
    st[i] = std::sin(g.x(i));
  }
  const double* u = f.values.data();
  return parallel_tasks(n, bins.count, workers, [&](std::size_t i, Accumulator& acc) {
    std::vector<double> cd(phi_samples);
    for (std::size_t m = i; m < n; ++m) {
      k.affine(ct[i] * ct[m], st[i] * st[m], cos_phi.data(), cd.data(), phi_samples);
      const double v = 0.5 * std::fabs(u[m] - u[i]);
      std::size_t j = 0;
      for (std::size_t p = 0; p < phi_samples; ++p) {
        while (j < bins.count && cd[p] < cos_lower[j]) ++j;
        if (j == bins.count) break;
        for (std::size_t b = j; b < bins.count && cd[p] <= cos_upper[b]; ++b) acc.add(b, v);
      }
    }
  });
}

Accumulator random_pairs(const Field& f, const Binning& bins, double root, std::size_t phi_samples,
                         std::uint64_t budget, std::uint64_t seed) {
  Accumulator acc(bins.count);
  std::mt19937_64 rng(seed);
  const Grid& g = f.grid;
  const std::size_t n = g.size();
  const double* u = f.values.data();
  const bool sphere = g.kind == GridKind::Theta1D;
  const double pi = std::numbers::pi;
  for (std::uint64_t t = 0; t < budget; ++t) {
    const std::size_t a = rng() % n;
    const std::size_t b = rng() % n;
    double d = 0.0;
    if (sphere) {
      const std::size_t p = rng() % phi_samples;
      const double dphi = pi * static_cast<double>(p) / static_cast<double>(phi_samples - 1);
      d = geodesic_distance(f.manifold, {g.x(a), 0.0}, {g.x(b), dphi});
    } else {
      d = geodesic_distance(f.manifold, g.point(a), g.point(b));
    }
    acc.add(bins.locate(root * d), 0.5 * std::fabs(u[b] - u[a]));
  }
  return acc;
}

}  // namespace

std::size_t ModulusCurve::empty_count() const {
  return static_cast<std::size_t>(std::count(nonempty.begin(), nonempty.end(), false));
}

ModulusCurve extract_modulus(const Field& field, const ModulusOptions& options) {
  field.validate();
  if (options.bins < 2) throw PreconditionError("modulus extraction needs at least 2 bins");
  const bool sphere = field.grid.kind == GridKind::Theta1D;
  if (sphere && options.phi_samples < 2) {
    throw PreconditionError("sphere modulus needs at least 2 azimuth samples");
  }
  const double root = std::sqrt(field.metric_scale);
  const double half_diameter = 0.5 * field.manifold.diameter() * root;

  Binning bins;
  bins.count = options.bins;
  bins.spacing = 2.0 * half_diameter / static_cast<double>(options.bins);
  bins.halfwidth = options.bin_halfwidth > 0.0
                       ? options.bin_halfwidth
                       : half_diameter / (2.0 * static_cast<double>(options.bins));

  const std::uint64_t nodes = field.grid.size();
  const std::uint64_t total = nodes * nodes * (sphere ? options.phi_samples : 1);
  const bool exhaustive = total <= options.pair_budget;

  Accumulator acc(bins.count);
  if (!exhaustive) {
    acc = random_pairs(field, bins, root, options.phi_samples, options.pair_budget, options.seed);
  } else if (sphere) {
    acc = sphere_pairs(field, bins, root, options.phi_samples, options.workers);
  } else {
    acc = flat_lags(field, bins, root, options.workers);
  }

  ModulusCurve c;
  c.bin_halfwidth = bins.halfwidth;
  c.time = field.time;
  c.pairs = exhaustive ? total : options.pair_budget;
  c.exhaustive = exhaustive;
  c.seed = options.seed;
  for (std::size_t j = 0; j < bins.count; ++j) {
    c.bin_centers.push_back(0.5 * bins.target(j));
    c.values.push_back(acc.best[j]);
    c.nonempty.push_back(acc.hit[j] != 0);
  }
  const double empty = static_cast<double>(c.empty_count());
  if (empty > options.max_empty_fraction * static_cast<double>(bins.count)) {
    throw EmptyBinsError(std::to_string(c.empty_count()) + " of " + std::to_string(bins.count) +
                         " modulus bins received no pair; raise pair_budget or widen the bins");
  }
  return c;
}

ModulusCurve extract_modulus(const Field& field, std::size_t bins, std::uint64_t pair_budget,
                             std::uint64_t seed) {
  ModulusOptions o;
  o.bins = bins;
  o.pair_budget = pair_budget;
  o.seed = seed;
  return extract_modulus(field, o);
}

ModulusCurve increasing_envelope(const ModulusCurve& c) {
  ModulusCurve out = c;
  double run = 0.0;
  for (std::size_t j = 0; j < out.values.size(); ++j) {
    run = j == 0 ? out.values[0] : std::max(run, out.values[j]);
    out.values[j] = run;
  }
  out.envelope_applied = true;
  return out;
}

std::vector<LagMaximum> lag_maxima(const Field& field) {
  field.validate();
  if (field.grid.kind == GridKind::Theta1D) {
    throw PreconditionError("lag maxima are defined on flat grids only");
  }
  std::vector<LagMaximum> out;
  const std::size_t n = lag_count(field.grid);
  for (std::size_t task = 0; task < n; ++task) {
    const double d = lag_distance(field.grid, task);
    if (d < 0.0) continue;
    out.push_back({d, lag_max(field, task)});
  }
  return out;
}

double oscillation(const Field& field) {
  if (field.values.empty()) return 0.0;
  double lo = 0.0;
  double hi = 0.0;
  simd::kernels().min_max(field.values.data(), field.values.size(), &lo, &hi);
  return 0.5 * (hi - lo);
}

}  // namespace moclab
