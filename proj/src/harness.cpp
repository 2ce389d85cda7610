#include "moclab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "moclab/errors.hpp"
#include "moclab/plot.hpp"
#include "moclab/report.hpp"

namespace moclab {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error("failed writing " + path.string());
}

std::string modulus_csv(const Outcome& o) {
  std::string s = "t,s,w_raw,w_envelope\n";
  for (std::size_t k = 0; k < o.raw.size(); ++k) {
    const ModulusCurve& raw = o.raw[k];
    const ModulusCurve& env = o.envelope[k];
    for (std::size_t j = 0; j < raw.size(); ++j) {
      if (!raw.nonempty[j]) continue;
      s += num(raw.time) + "," + num(raw.bin_centers[j]) + "," + num(raw.values[j]) + "," +
           num(env.values[j]) + "\n";
    }
  }
  return s;
}

std::string comparison_csv(const Outcome& o) {
  std::string s = "t,s,phi,w_envelope,margin\n";
  for (const auto& r : o.comparison) {
    s += num(r.time) + "," + num(r.s) + "," + num(r.phi) + "," + num(r.w_envelope) + "," +
         num(r.margin) + "\n";
  }
  return s;
}

std::string summary_csv(const std::vector<ScenarioResult>& results) {
  std::string s = "id,theorem,status,max_violation,tolerance_budget,pass\n";
  for (const auto& r : results) {
    if (!r.ok) {
      s += r.id + ",,error,,,false\n";
      continue;
    }
    s += r.id + "," + to_string(r.report.theorem) + "," + to_string(r.report.status) + "," +
         num(r.report.max_violation) + "," + num(r.report.tolerance_budget) + "," +
         (r.report.pass ? "true" : "false") + "\n";
  }
  return s;
}

}  // namespace

int exit_code_for(const std::vector<ScenarioResult>& results) {
  int code = kExitPass;
  for (const auto& r : results) {
    if (!r.ok) return kExitRuntime;
    if (!r.report.pass) code = kExitViolation;
  }
  return code;
}

void write_outcome(const std::filesystem::path& dir, const Outcome& o) {
  write_file(dir / "modulus.csv", modulus_csv(o));
  write_file(dir / "comparison.csv", comparison_csv(o));
  write_file(dir / "report.json", serialize_report(o.report));
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MOCLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) cap = static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::min(cap, jobs));
}

RunSummary run(const Config& config, std::ostream& log) {
  RunSummary summary;
  const std::filesystem::path root(config.output);
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec || !std::filesystem::is_directory(root)) {
    log << "error: cannot create output directory " << root.string() << ": " << ec.message() << "\n";
    summary.exit_code = kExitRuntime;
    return summary;
  }

  const std::size_t n = config.scenarios.size();
  summary.results.resize(n);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto job = [&](std::size_t i) {
    const ScenarioSpec& sc = config.scenarios[i];
    ScenarioResult& res = summary.results[i];
    res.id = sc.id;
    try {
      const auto dir = root / sc.id;
      std::filesystem::create_directories(dir);
      const Outcome o = verify(sc);
      res.report = o.report;
      write_outcome(dir, o);
      if (config.emit_plots) emit_plots(dir);
      res.ok = true;
    } catch (const std::exception& e) {
      res.ok = false;
      res.error = e.what();
    }
    std::lock_guard<std::mutex> lock(log_mutex);
    if (res.ok) {
      log << sc.id << ": " << to_string(res.report.status) << " (max_violation " << num(res.report.max_violation)
          << ", budget " << num(res.report.tolerance_budget) << ")\n";
    } else {
      log << sc.id << ": error: " << res.error << "\n";
    }
  };

  const std::size_t workers = worker_count(n);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) job(i);
    });
  }
  for (auto& t : pool) t.join();

  summary.exit_code = exit_code_for(summary.results);
  try {
    write_file(root / "summary.csv", summary_csv(summary.results));
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    summary.exit_code = kExitRuntime;
  }
  return summary;
}

const std::vector<Preset>& builtin_scenarios() {
  static const std::vector<Preset> presets{
      {"main-sphere-heat", "heat on S^2 from the first eigenfunction",
       "[scenario main-sphere-heat]\n"
       "theorem = main\n"
       "manifold = sphere\n"
       "dimension = 2\n"
       "flow = heat\n"
       "u0 = eigenfunction\n"
       "horizon = 0.5\n"
       "checkpoints = 0.1, 0.25, 0.5\n"
       "grid = 400\n"
       "epsilon = 1e-3\n"},
      {"main-torus-mcf", "graphical mean curvature flow on the unit torus, band-limited data",
       "[scenario main-torus-mcf]\n"
       "theorem = main\n"
       "manifold = torus\n"
       "lengths = 1, 1\n"
       "flow = graphical-mcf\n"
       "u0 = bandlimited\n"
       "modes = 2\n"
       "amplitude = 0.1\n"
       "seed = 7\n"
       "horizon = 0.05\n"
       "checkpoints = 0.01, 0.025, 0.05\n"
       "grid = 48\n"
       "epsilon = 1e-3\n"},
      {"main-torus-plap", "p-Laplacian flow (p = 3) on the unit torus, band-limited data",
       "[scenario main-torus-plap]\n"
       "theorem = main\n"
       "manifold = torus\n"
       "lengths = 1, 1\n"
       "flow = p-laplacian\n"
       "p = 3\n"
       "u0 = bandlimited\n"
       "modes = 2\n"
       "amplitude = 0.1\n"
       "seed = 7\n"
       "horizon = 0.05\n"
       "checkpoints = 0.01, 0.025, 0.05\n"
       "grid = 48\n"
       "epsilon = 1e-3\n"},
      {"ricci-sphere", "heat on the shrinking S^2 under normalized Ricci flow",
       "[scenario ricci-sphere]\n"
       "theorem = ricci-flow\n"
       "manifold = sphere\n"
       "dimension = 2\n"
       "flow = heat\n"
       "u0 = eigenfunction\n"
       "horizon = 0.25\n"
       "checkpoints = 0.1, 0.25\n"
       "grid = 200\n"
       "epsilon = 1e-3\n"},
      {"height-torus", "height-dependent bound for heat on the unit torus",
       "[scenario height-torus]\n"
       "theorem = height-bound\n"
       "manifold = torus\n"
       "lengths = 1, 1\n"
       "flow = heat\n"
       "u0 = bandlimited\n"
       "modes = 2\n"
       "amplitude = 0.1\n"
       "seed = 3\n"
       "horizon = 0.5\n"
       "checkpoints = 0.1, 0.3, 0.5\n"
       "grid = 48\n"
       "delta_g = 0.05\n"},
      {"bakry-circle", "heat with drift f = cos x on the circle of length 2 pi",
       "[scenario bakry-circle]\n"
       "theorem = bakry-emery\n"
       "manifold = circle\n"
       "length = 2pi\n"
       "flow = heat\n"
       "drift = cosine\n"
       "drift_amplitude = 1\n"
       "u0 = eigenfunction\n"
       "horizon = 0.5\n"
       "checkpoints = 0.1, 0.25, 0.5\n"
       "grid = 256\n"
       "epsilon = 1e-3\n"},
      {"neumann-interval", "heat on [0, 1] with Neumann ends from cos(pi x)",
       "[scenario neumann-interval]\n"
       "theorem = neumann\n"
       "manifold = interval\n"
       "length = 1\n"
       "boundary = neumann\n"
       "flow = heat\n"
       "u0 = eigenfunction\n"
       "horizon = 0.1\n"
       "checkpoints = 0.02, 0.05, 0.1\n"
       "grid = 200\n"
       "epsilon = 1e-3\n"},
      {"neumann-rect-mcf", "graphical mean curvature flow on the unit square, Neumann sides",
       "[scenario neumann-rect-mcf]\n"
       "theorem = neumann\n"
       "manifold = rectangle\n"
       "lengths = 1, 1\n"
       "boundary = neumann\n"
       "flow = graphical-mcf\n"
       "u0 = terms\n"
       "terms = 0.1:cos:1:one:0, 0.05:cos:1:cos:1\n"
       "horizon = 0.05\n"
       "checkpoints = 0.01, 0.025, 0.05\n"
       "grid = 32\n"
       "epsilon = 1e-3\n"},
      {"dirichlet-interval", "heat on [0, 1] with zero boundary values against phi = pi s",
       "[scenario dirichlet-interval]\n"
       "theorem = dirichlet\n"
       "manifold = interval\n"
       "length = 1\n"
       "boundary = dirichlet\n"
       "flow = heat\n"
       "u0 = eigenfunction\n"
       "phi = linear\n"
       "phi_slope = pi\n"
       "horizon = 0.1\n"
       "checkpoints = 0.02, 0.05, 0.1\n"
       "grid = 201\n"},
      {"alpha-admissibility", "sampled admissibility of the heat diffusion matrix",
       "[scenario alpha-admissibility]\n"
       "theorem = alpha-admissible\n"
       "flow = heat\n"
       "samples = 10000\n"
       "seed = 11\n"},
  };
  return presets;
}

const Preset* find_preset(const std::string& id) {
  for (const auto& p : builtin_scenarios()) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

std::string list_scenarios(bool verbose) {
  std::size_t width = 2;
  for (const auto& p : builtin_scenarios()) width = std::max(width, p.id.size());
  std::ostringstream o;
  o << "id" << std::string(width - 2 + 2, ' ') << "description\n";
  for (const auto& p : builtin_scenarios()) {
    o << p.id << std::string(width - p.id.size() + 2, ' ') << p.summary << "\n";
    if (verbose) o << "\n" << p.config_text << "\n";
  }
  return o.str();
}

}  // namespace moclab
