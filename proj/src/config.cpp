#include "moclab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace moclab {
namespace {

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t key_col = 0;
  std::size_t value_col = 0;
};

struct Section {
  bool is_run = false;
  std::string id;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

const std::set<std::string> kRunKeys{"output", "emit_plots", "grid", "cfl_safety", "bins", "seed"};

const std::set<std::string> kScenarioKeys{
    "theorem",       "manifold",     "length",         "lengths",      "dimension",
    "boundary",      "flow",         "p",              "drift",        "drift_amplitude",
    "drift_wavenumber", "u0",        "u0_value",       "amplitude",    "modes",
    "terms",         "horizon",      "checkpoints",    "grid",         "grid_y",
    "bins",          "profile_cells", "phi_samples",   "pair_budget",  "epsilon",
    "cfl_safety",    "dt_max",       "seed",           "max_empty_fraction", "delta_g",
    "height_cells",  "phi",          "phi_slope",      "phi_coef",     "phi_exponent",
    "samples",       "alpha_dimension", "spot_test",   "workers"};

[[noreturn]] void fail(ConfigErrorKind kind, std::size_t line, std::size_t col, const std::string& msg) {
  throw ConfigError(kind, line, col, msg);
}

std::string trim(std::string_view s, std::size_t* offset = nullptr) {
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  std::size_t e = s.size();
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  if (offset) *offset = b;
  return std::string(s.substr(b, e - b));
}

bool valid_name(std::string_view s, bool allow_upper) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
           c == '_' || c == '-' || c == '.' || (allow_upper && std::isupper(static_cast<unsigned char>(c)));
  });
}

std::vector<Section> split_sections(std::string_view text) {
  std::vector<Section> sections;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const std::size_t hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::size_t lead = 0;
    const std::string line = trim(raw, &lead);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const std::size_t col = lead + 1;
    if (line.front() == '[') {
      if (line.back() != ']') fail(ConfigErrorKind::Syntax, line_no, col, "section header must end with ']'");
      const std::string inner = trim(std::string_view(line).substr(1, line.size() - 2));
      Section s;
      s.line = line_no;
      if (inner == "run") {
        s.is_run = true;
      } else if (inner.rfind("scenario", 0) == 0 && inner.size() > 8 &&
                 std::isspace(static_cast<unsigned char>(inner[8]))) {
        s.id = trim(std::string_view(inner).substr(8));
        if (!valid_name(s.id, true)) {
          fail(ConfigErrorKind::Syntax, line_no, col,
               "scenario id '" + s.id + "' may only use letters, digits, '-', '_' and '.'");
        }
      } else {
        fail(ConfigErrorKind::Syntax, line_no, col,
             "unknown section '[" + inner + "]'; expected [run] or [scenario <id>]");
      }
      sections.push_back(std::move(s));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ConfigErrorKind::Syntax, line_no, col, "expected 'key = value'");
    }
    if (sections.empty()) {
      fail(ConfigErrorKind::Syntax, line_no, col, "key outside of any section");
    }
    Entry e;
    e.line = line_no;
    e.key_col = col;
    e.key = trim(std::string_view(line).substr(0, eq));
    std::size_t voff = 0;
    e.value = trim(std::string_view(line).substr(eq + 1), &voff);
    e.value_col = col + eq + 1 + voff;
    if (!valid_name(e.key, false)) fail(ConfigErrorKind::Syntax, line_no, col, "malformed key '" + e.key + "'");
    if (e.value.empty()) fail(ConfigErrorKind::Syntax, line_no, e.value_col, "missing value for '" + e.key + "'");
    for (const Entry& prev : sections.back().entries) {
      if (prev.key == e.key) {
        fail(ConfigErrorKind::Duplicate, line_no, col,
             "key '" + e.key + "' repeated (first set on line " + std::to_string(prev.line) + ")");
      }
    }
    sections.back().entries.push_back(std::move(e));
    if (end == text.size()) break;
  }
  return sections;
}

// Typed access to the entries of one section.
class Reader {
 public:
  explicit Reader(const Section& s) : s_(s) {
    const auto& allowed = s.is_run ? kRunKeys : kScenarioKeys;
    for (const Entry& e : s.entries) {
      if (!allowed.count(e.key)) {
        fail(ConfigErrorKind::UnknownKey, e.line, e.key_col,
             "unknown key '" + e.key + "' in " + (s.is_run ? "[run]" : "[scenario " + s.id + "]"));
      }
    }
  }

  const Entry* find(const std::string& key) const {
    for (const Entry& e : s_.entries) {
      if (e.key == key) return &e;
    }
    return nullptr;
  }

  const Entry& require(const std::string& key) const {
    const Entry* e = find(key);
    if (!e) {
      fail(ConfigErrorKind::MissingField, s_.line, 1,
           "scenario '" + s_.id + "' is missing required field '" + key + "'");
    }
    return *e;
  }

  static double real(const Entry& e, std::string_view text, std::size_t col) {
    const std::string t = trim(text);
    double mult = 1.0;
    std::string num = t;
    if (t == "pi") return std::numbers::pi;
    if (t.size() > 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
      mult = std::numbers::pi;
      num = t.substr(0, t.size() - 2);
      if (!num.empty() && num.back() == '*') num.pop_back();
    }
    double v = 0.0;
    const char* end = num.data() + num.size();
    const auto r = std::from_chars(num.data(), end, v);
    if (num.empty() || r.ec != std::errc() || r.ptr != end || !std::isfinite(v)) {
      fail(ConfigErrorKind::Syntax, e.line, col, "'" + t + "' is not a number (key '" + e.key + "')");
    }
    return v * mult;
  }

  static double real(const Entry& e) { return real(e, e.value, e.value_col); }

  static std::uint64_t integer(const Entry& e) {
    std::uint64_t v = 0;
    const char* end = e.value.data() + e.value.size();
    const auto r = std::from_chars(e.value.data(), end, v);
    if (r.ec != std::errc() || r.ptr != end) {
      fail(ConfigErrorKind::Syntax, e.line, e.value_col,
           "'" + e.value + "' is not a non-negative integer (key '" + e.key + "')");
    }
    return v;
  }

  static bool boolean(const Entry& e) {
    if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
    if (e.value == "false" || e.value == "no" || e.value == "0") return false;
    fail(ConfigErrorKind::UnknownEnum, e.line, e.value_col,
         "unknown value '" + e.value + "' for " + e.key + "; expected one of: true, false");
  }

  static std::size_t choice(const Entry& e, const std::vector<std::string>& tags) {
    for (std::size_t i = 0; i < tags.size(); ++i) {
      if (tags[i] == e.value) return i;
    }
    std::string list;
    for (const auto& t : tags) list += (list.empty() ? "" : ", ") + t;
    fail(ConfigErrorKind::UnknownEnum, e.line, e.value_col,
         "unknown value '" + e.value + "' for " + e.key + "; expected one of: " + list);
  }

  // Comma-separated list; each item keeps its own column for diagnostics.
  static std::vector<std::pair<std::string, std::size_t>> items(const Entry& e) {
    std::vector<std::pair<std::string, std::size_t>> out;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = e.value.find(',', start);
      const std::string_view piece =
          std::string_view(e.value).substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      std::size_t off = 0;
      const std::string t = trim(piece, &off);
      if (t.empty()) fail(ConfigErrorKind::Syntax, e.line, e.value_col + start, "empty list item in '" + e.key + "'");
      out.emplace_back(t, e.value_col + start + off);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  }

  static std::vector<double> reals(const Entry& e) {
    std::vector<double> out;
    for (const auto& [t, col] : items(e)) out.push_back(real(e, t, col));
    return out;
  }

  const Section& section() const { return s_; }

 private:
  const Section& s_;
};

void range(bool ok, const Entry& e, const std::string& what) {
  if (!ok) fail(ConfigErrorKind::OutOfRange, e.line, e.value_col, e.key + " = " + e.value + " is out of range: " + what);
}

template <class T, class F>
void optional_real(const Reader& rd, const char* key, T& target, F check, const char* what) {
  if (const Entry* e = rd.find(key)) {
    const double v = Reader::real(*e);
    range(check(v), *e, what);
    target = static_cast<T>(v);
  }
}

template <class T, class F>
void optional_int(const Reader& rd, const char* key, T& target, F check, const char* what) {
  if (const Entry* e = rd.find(key)) {
    const std::uint64_t v = Reader::integer(*e);
    range(check(v), *e, what);
    target = static_cast<T>(v);
  }
}

ManifoldModel build_manifold(const Reader& rd) {
  const Entry& m = rd.require("manifold");
  const std::size_t kind = Reader::choice(m, {"circle", "torus", "sphere", "interval", "rectangle"});
  auto side_lengths = [&](double def) -> std::pair<double, double> {
    if (const Entry* e = rd.find("lengths")) {
      const auto v = Reader::reals(*e);
      range(v.size() == 2, *e, "expected two lengths");
      range(v[0] > 0.0 && v[1] > 0.0, *e, "lengths must be positive");
      return {v[0], v[1]};
    }
    if (const Entry* e = rd.find("length")) {
      const double v = Reader::real(*e);
      range(v > 0.0, *e, "length must be positive");
      return {v, v};
    }
    return {def, def};
  };
  auto boundary = [&] {
    const Entry* e = rd.find("boundary");
    if (!e) return Boundary::NeumannDomain;
    return Reader::choice(*e, {"neumann", "dirichlet"}) == 0 ? Boundary::NeumannDomain
                                                            : Boundary::DirichletDomain;
  };
  switch (kind) {
    case 0:
      return ManifoldModel::circle(side_lengths(2.0 * std::numbers::pi).first);
    case 1: {
      const auto [a, b] = side_lengths(1.0);
      return ManifoldModel::flat_torus(a, b);
    }
    case 2: {
      int n = 2;
      optional_int(rd, "dimension", n, [](std::uint64_t v) { return v >= 1 && v <= 64; }, "1 <= dimension <= 64");
      return ManifoldModel::round_sphere(n);
    }
    case 3:
      return ManifoldModel::interval(side_lengths(1.0).first, boundary());
    default: {
      const auto [a, b] = side_lengths(1.0);
      return ManifoldModel::rectangle(a, b, boundary());
    }
  }
}

FlowSpec build_flow(const Reader& rd, const ManifoldModel& m) {
  FlowSpec flow = FlowSpec::heat();
  if (const Entry* e = rd.find("flow")) {
    switch (Reader::choice(*e, {"heat", "graphical-mcf", "p-laplacian"})) {
      case 1:
        flow = FlowSpec::graphical_mcf();
        break;
      case 2: {
        const Entry& pe = rd.require("p");
        const double p = Reader::real(pe);
        range(p > 2.0, pe, "p-Laplacian needs p > 2");
        flow = FlowSpec::p_laplacian(p);
        break;
      }
      default:
        break;
    }
  }
  if (const Entry* e = rd.find("drift")) {
    if (Reader::choice(*e, {"none", "cosine"}) == 1) {
      double amp = 1.0;
      int k = 1;
      optional_real(rd, "drift_amplitude", amp, [](double v) { return std::isfinite(v); }, "finite");
      optional_int(rd, "drift_wavenumber", k, [](std::uint64_t v) { return v >= 1 && v <= 1000; }, "1..1000");
      double period = 1.0;
      if (const auto* c = std::get_if<Circle>(&m.shape())) period = c->circumference;
      if (const auto* t = std::get_if<FlatTorus>(&m.shape())) period = t->length_x;
      flow.drift = cosine_potential(amp, period, k);
    }
  }
  return flow;
}

InitialProfile build_initial(const Reader& rd) {
  InitialProfile p = InitialProfile::eigenfunction(1.0);
  const Entry* e = rd.find("u0");
  const std::size_t kind = e ? Reader::choice(*e, {"constant", "eigenfunction", "bandlimited", "terms"}) : 1;
  switch (kind) {
    case 0:
      p = InitialProfile::constant(0.0);
      optional_real(rd, "u0_value", p.value, [](double v) { return std::isfinite(v); }, "finite");
      break;
    case 2:
      p = InitialProfile::bandlimited(0, 2, 0.1);
      optional_int(rd, "modes", p.modes, [](std::uint64_t v) { return v >= 1 && v <= 64; }, "1 <= modes <= 64");
      optional_real(rd, "amplitude", p.amplitude, [](double v) { return v >= 0.0; }, "amplitude >= 0");
      break;
    case 3: {
      const Entry& t = rd.require("terms");
      std::vector<Term> terms;
      for (const auto& [text, col] : Reader::items(t)) {
        try {
          terms.push_back(parse_term(text));
        } catch (const PreconditionError& err) {
          fail(ConfigErrorKind::Syntax, t.line, col, err.what());
        }
      }
      p = InitialProfile::from_terms(std::move(terms));
      break;
    }
    default:
      optional_real(rd, "amplitude", p.amplitude, [](double v) { return std::isfinite(v); }, "finite");
      break;
  }
  return p;
}

ScenarioSpec build_scenario(const Reader& rd) {
  ScenarioSpec sc;
  sc.id = rd.section().id;
  const Entry& th = rd.require("theorem");
  sc.theorem = static_cast<Theorem>(Reader::choice(th, theorem_tags()));
  const bool alpha_only = sc.theorem == Theorem::AlphaAdmissible;
  sc.manifold = alpha_only && !rd.find("manifold") ? ManifoldModel::circle(2.0 * std::numbers::pi)
                                                   : build_manifold(rd);
  sc.flow = build_flow(rd, sc.manifold);
  sc.u0 = build_initial(rd);
  if (!alpha_only) {
    const Entry& h = rd.require("horizon");
    sc.horizon = Reader::real(h);
    range(sc.horizon > 0.0, h, "horizon must be positive");
    const Entry& c = rd.require("checkpoints");
    sc.checkpoints = Reader::reals(c);
    for (std::size_t i = 0; i < sc.checkpoints.size(); ++i) {
      range(sc.checkpoints[i] > 0.0 && sc.checkpoints[i] <= sc.horizon, c, "checkpoints must lie in (0, horizon]");
      range(i == 0 || sc.checkpoints[i] > sc.checkpoints[i - 1], c, "checkpoints must increase");
    }
  }
  auto pos = [](double v) { return v > 0.0; };
  optional_int(rd, "grid", sc.grid, [](std::uint64_t v) { return v >= 4 && v <= 1u << 16; }, "4 <= grid <= 65536");
  optional_int(rd, "grid_y", sc.grid_y, [](std::uint64_t v) { return v >= 4 && v <= 1u << 16; }, "4 <= grid_y <= 65536");
  optional_int(rd, "bins", sc.bins, [](std::uint64_t v) { return v >= 2 && v <= 1u << 16; }, "2 <= bins <= 65536");
  optional_int(rd, "profile_cells", sc.profile_cells, [](std::uint64_t v) { return v >= 2 && v <= 1u << 20; }, ">= 2");
  optional_int(rd, "phi_samples", sc.phi_samples, [](std::uint64_t v) { return v >= 2 && v <= 1u << 16; }, "2 <= phi_samples <= 65536");
  optional_int(rd, "pair_budget", sc.pair_budget, [](std::uint64_t v) { return v >= 1; }, ">= 1");
  optional_int(rd, "seed", sc.seed, [](std::uint64_t) { return true; }, "");
  optional_real(rd, "epsilon", sc.epsilon, pos, "epsilon > 0");
  optional_real(rd, "cfl_safety", sc.cfl_safety, [](double v) { return v > 0.0 && v < 1.0; }, "0 < cfl_safety < 1");
  optional_real(rd, "dt_max", sc.dt_max, pos, "dt_max > 0");
  optional_real(rd, "max_empty_fraction", sc.max_empty_fraction, [](double v) { return v >= 0.0 && v <= 1.0; }, "in [0, 1]");
  optional_real(rd, "delta_g", sc.delta_g, [](double v) { return v >= 0.0; }, "delta_g >= 0");
  optional_int(rd, "height_cells", sc.height_cells, [](std::uint64_t v) { return v >= 2 && v <= 1u << 20; }, ">= 2");
  optional_int(rd, "samples", sc.samples, [](std::uint64_t v) { return v >= 1; }, ">= 1");
  optional_int(rd, "alpha_dimension", sc.alpha_dimension, [](std::uint64_t v) { return v >= 1 && v <= 64; }, "1..64");
  optional_int(rd, "workers", sc.workers, [](std::uint64_t v) { return v >= 1 && v <= 256; }, "1..256");
  if (const Entry* e = rd.find("spot_test")) sc.spot_test = Reader::boolean(*e);
  if (const Entry* e = rd.find("phi")) sc.phi.kind = Reader::choice(*e, {"linear", "power"}) == 0 ? "linear" : "power";
  optional_real(rd, "phi_slope", sc.phi.slope, [](double v) { return std::isfinite(v); }, "finite");
  optional_real(rd, "phi_coef", sc.phi.coefficient, [](double v) { return std::isfinite(v); }, "finite");
  optional_real(rd, "phi_exponent", sc.phi.exponent, pos, "phi_exponent > 0");
  return sc;
}

}  // namespace

std::string to_string(ConfigErrorKind k) {
  switch (k) {
    case ConfigErrorKind::Syntax:
      return "syntax error";
    case ConfigErrorKind::UnknownKey:
      return "unknown key";
    case ConfigErrorKind::MissingField:
      return "missing field";
    case ConfigErrorKind::OutOfRange:
      return "out of range";
    case ConfigErrorKind::UnknownEnum:
      return "unknown value";
    case ConfigErrorKind::Duplicate:
      return "duplicate";
  }
  return "error";
}

ConfigError::ConfigError(ConfigErrorKind kind, std::size_t line, std::size_t column,
                         const std::string& message)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
            to_string(kind) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

Config parse_config(std::string_view text) {
  const std::vector<Section> sections = split_sections(text);
  Config cfg;
  const Section* run = nullptr;
  std::map<std::string, std::size_t> seen;
  for (const Section& s : sections) {
    if (s.is_run) {
      if (run) {
        fail(ConfigErrorKind::Duplicate, s.line, 1,
             "[run] appears twice (lines " + std::to_string(run->line) + " and " + std::to_string(s.line) + ")");
      }
      run = &s;
      continue;
    }
    const auto [it, fresh] = seen.emplace(s.id, s.line);
    if (!fresh) {
      fail(ConfigErrorKind::Duplicate, s.line, 1,
           "scenario id '" + s.id + "' defined on line " + std::to_string(it->second) +
               " and again on line " + std::to_string(s.line));
    }
  }
  if (run) {
    const Reader rd(*run);
    if (const Entry* e = rd.find("output")) cfg.output = e->value;
    if (const Entry* e = rd.find("emit_plots")) cfg.emit_plots = Reader::boolean(*e);
    if (const Entry* e = rd.find("grid")) {
      const auto v = Reader::integer(*e);
      range(v >= 4 && v <= 1u << 16, *e, "4 <= grid <= 65536");
      cfg.grid = v;
    }
    if (const Entry* e = rd.find("bins")) {
      const auto v = Reader::integer(*e);
      range(v >= 2 && v <= 1u << 16, *e, "2 <= bins <= 65536");
      cfg.bins = v;
    }
    if (const Entry* e = rd.find("cfl_safety")) {
      const double v = Reader::real(*e);
      range(v > 0.0 && v < 1.0, *e, "0 < cfl_safety < 1");
      cfg.cfl_safety = v;
    }
    if (const Entry* e = rd.find("seed")) {
      cfg.seed = Reader::integer(*e);
      cfg.seed_overridden = true;
    }
  }
  for (const Section& s : sections) {
    if (s.is_run) continue;
    const Reader rd(s);
    ScenarioSpec sc = build_scenario(rd);
    if (cfg.grid) sc.grid = *cfg.grid;
    if (cfg.bins) sc.bins = *cfg.bins;
    if (cfg.cfl_safety) sc.cfl_safety = *cfg.cfl_safety;
    if (cfg.seed_overridden) sc.seed = cfg.seed;
    sc.u0.seed = sc.seed;
    try {
      sc.validate();
    } catch (const PreconditionError& e) {
      fail(ConfigErrorKind::OutOfRange, s.line, 1, "scenario '" + s.id + "': " + e.what());
    }
    cfg.scenarios.push_back(std::move(sc));
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace moclab
