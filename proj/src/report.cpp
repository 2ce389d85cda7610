#include "moclab/report.hpp"

#include <cmath>

#include "moclab/errors.hpp"

namespace moclab {
namespace {

using nlohmann::ordered_json;

ordered_json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

const ordered_json& field(const ordered_json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw PreconditionError(std::string("report JSON lacks field '") + key + "'");
  }
  return j.at(key);
}

double read_number(const ordered_json& j, const char* key) {
  const ordered_json& v = field(j, key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw PreconditionError(std::string("report field '") + key + "' is not a number");
}

template <class T>
T read(const ordered_json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw PreconditionError(std::string("report field '") + key + "' has the wrong type");
  }
}

}  // namespace

ordered_json report_to_json(const VerificationReport& r) {
  ordered_json j;
  j["scenario_id"] = r.scenario_id;
  j["theorem"] = to_string(r.theorem);
  j["status"] = to_string(r.status);
  j["pass"] = r.pass;
  j["max_violation"] = number(r.max_violation);
  j["tolerance_budget"] = number(r.tolerance_budget);
  const ToleranceBudget& b = r.budget;
  j["budget"] = {{"epsilon", number(b.epsilon)}, {"c1", number(b.c1)},
                 {"delta_bin", number(b.delta_bin)}, {"c2", number(b.c2)},
                 {"h", number(b.h)}, {"c3", number(b.c3)},
                 {"dt", number(b.dt)}, {"floor", number(b.floor)}};
  ordered_json rows = ordered_json::array();
  for (const auto& c : r.checkpoints) {
    rows.push_back({{"time", number(c.time)},
                    {"max_margin", number(c.max_margin)},
                    {"argmax_s", number(c.argmax_s)},
                    {"nonempty_bins", c.nonempty_bins},
                    {"oscillation", number(c.oscillation)}});
  }
  j["checkpoints"] = rows;
  const Provenance& p = r.provenance;
  j["provenance"] = {{"seed", p.seed},
                     {"grid_x", p.grid_x},
                     {"grid_y", p.grid_y},
                     {"bins", p.bins},
                     {"profile_cells", p.profile_cells},
                     {"phi_samples", p.phi_samples},
                     {"pair_budget", p.pair_budget},
                     {"pairs", p.pairs},
                     {"pairs_exhaustive", p.pairs_exhaustive},
                     {"h", number(p.h)},
                     {"bin_halfwidth", number(p.bin_halfwidth)},
                     {"cfl_safety", number(p.cfl_safety)},
                     {"dt_max", number(p.dt_max)},
                     {"max_dt", number(p.max_dt)},
                     {"profile_max_dt", number(p.profile_max_dt)},
                     {"steps", p.steps}};
  ordered_json metrics = ordered_json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = number(v);
  j["metrics"] = metrics;
  j["notes"] = r.notes;
  return j;
}

VerificationReport report_from_json(const ordered_json& j) {
  VerificationReport r;
  r.scenario_id = read<std::string>(j, "scenario_id");
  const auto tag = read<std::string>(j, "theorem");
  const auto theorem = theorem_from_string(tag);
  if (!theorem) throw PreconditionError("unknown theorem tag '" + tag + "' in report");
  r.theorem = *theorem;
  const auto status = read<std::string>(j, "status");
  if (status == "pass") {
    r.status = Status::Pass;
  } else if (status == "violation") {
    r.status = Status::Violation;
  } else if (status == "hypothesis-not-met") {
    r.status = Status::HypothesisNotMet;
  } else {
    throw PreconditionError("unknown status '" + status + "' in report");
  }
  r.pass = read<bool>(j, "pass");
  r.max_violation = read_number(j, "max_violation");
  r.tolerance_budget = read_number(j, "tolerance_budget");
  const auto& b = field(j, "budget");
  r.budget = {read_number(b, "epsilon"), read_number(b, "c1"), read_number(b, "delta_bin"),
              read_number(b, "c2"),      read_number(b, "h"),  read_number(b, "c3"),
              read_number(b, "dt"),      read_number(b, "floor")};
  for (const auto& c : field(j, "checkpoints")) {
    r.checkpoints.push_back({read_number(c, "time"), read_number(c, "max_margin"),
                             read_number(c, "argmax_s"), read<std::size_t>(c, "nonempty_bins"),
                             read_number(c, "oscillation")});
  }
  const auto& p = field(j, "provenance");
  auto& q = r.provenance;
  q.seed = read<std::uint64_t>(p, "seed");
  q.grid_x = read<std::size_t>(p, "grid_x");
  q.grid_y = read<std::size_t>(p, "grid_y");
  q.bins = read<std::size_t>(p, "bins");
  q.profile_cells = read<std::size_t>(p, "profile_cells");
  q.phi_samples = read<std::size_t>(p, "phi_samples");
  q.pair_budget = read<std::uint64_t>(p, "pair_budget");
  q.pairs = read<std::uint64_t>(p, "pairs");
  q.pairs_exhaustive = read<bool>(p, "pairs_exhaustive");
  q.h = read_number(p, "h");
  q.bin_halfwidth = read_number(p, "bin_halfwidth");
  q.cfl_safety = read_number(p, "cfl_safety");
  q.dt_max = read_number(p, "dt_max");
  q.max_dt = read_number(p, "max_dt");
  q.profile_max_dt = read_number(p, "profile_max_dt");
  q.steps = read<std::uint64_t>(p, "steps");
  const auto& m = field(j, "metrics");
  for (auto it = m.begin(); it != m.end(); ++it) r.metrics[it.key()] = read_number(m, it.key().c_str());
  r.notes = read<std::vector<std::string>>(j, "notes");
  return r;
}

std::string serialize_report(const VerificationReport& r) { return report_to_json(r).dump(2) + "\n"; }

}  // namespace moclab
