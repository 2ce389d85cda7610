#include "moclab/scenario.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <random>

#include "moclab/errors.hpp"

namespace moclab {
namespace {

constexpr double kPi = std::numbers::pi;

// (length_x, length_y, periodic) of the chart.
struct ChartScale {
  double lx = 1.0;
  double ly = 1.0;
  bool periodic = false;
};

ChartScale chart_scale(const ManifoldModel& m) {
  const auto& s = m.shape();
  if (const auto* c = std::get_if<Circle>(&s)) return {c->circumference, 1.0, true};
  if (const auto* t = std::get_if<FlatTorus>(&s)) return {t->length_x, t->length_y, true};
  if (std::holds_alternative<RoundSphere>(s)) return {kPi, 1.0, false};
  if (const auto* i = std::get_if<Interval>(&s)) return {i->length, 1.0, false};
  const auto& r = std::get<Rectangle>(s);
  return {r.length_x, r.length_y, false};
}

double basis(const std::string& f, double arg) {
  if (f == "sin") return std::sin(arg);
  if (f == "cos") return std::cos(arg);
  return 1.0;
}

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) {
    throw PreconditionError("term field " + std::string(what) + " is not a number: '" +
                            std::string(s) + "'");
  }
  return v;
}

std::string parse_basis(std::string_view s) {
  if (s == "sin" || s == "cos" || s == "one") return std::string(s);
  throw PreconditionError("term basis must be sin, cos or one, got '" + std::string(s) + "'");
}

std::vector<Term> bandlimited_terms(const ManifoldModel& m, const InitialProfile& p) {
  if (p.modes < 1) throw PreconditionError("band-limited profile needs modes >= 1");
  const bool two_d = m.dimension() == 2 && !m.is<RoundSphere>();
  const bool periodic = m.closed() && !m.is<RoundSphere>();
  const bool dirichlet = m.boundary() == Boundary::DirichletDomain;
  std::vector<Term> terms;
  auto functions = [&](int k) -> std::vector<std::string> {
    if (periodic) return k == 0 ? std::vector<std::string>{"one"} : std::vector<std::string>{"cos", "sin"};
    if (dirichlet) return {"sin"};
    return {k == 0 ? "one" : "cos"};
  };
  const int start = dirichlet ? 1 : 0;
  for (int kx = start; kx <= p.modes; ++kx) {
    const int ky_end = two_d ? p.modes : start;
    for (int ky = start; ky <= ky_end; ++ky) {
      if (kx == 0 && ky == 0) continue;
      for (const auto& fx : functions(kx)) {
        if (!two_d) {
          terms.push_back({0.0, fx, static_cast<double>(kx), "one", 0.0});
          continue;
        }
        for (const auto& fy : functions(ky)) {
          terms.push_back({0.0, fx, static_cast<double>(kx), fy, static_cast<double>(ky)});
        }
      }
    }
  }
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  double l1 = 0.0;
  for (auto& t : terms) {
    t.amplitude = coef(rng);
    l1 += std::fabs(t.amplitude);
  }
  for (auto& t : terms) t.amplitude *= p.amplitude / l1;
  return terms;
}

std::function<double(Point)> terms_function(const ManifoldModel& m, std::vector<Term> terms) {
  const ChartScale cs = chart_scale(m);
  const double fx = (cs.periodic ? 2.0 : 1.0) * kPi / cs.lx;
  const double fy = (cs.periodic ? 2.0 : 1.0) * kPi / cs.ly;
  return [terms = std::move(terms), fx, fy](Point p) {
    double v = 0.0;
    for (const auto& t : terms) {
      v += t.amplitude * basis(t.fx, t.kx * fx * p.x) * basis(t.fy, t.ky * fy * p.y);
    }
    return v;
  };
}

}  // namespace

std::string to_string(Theorem t) { return theorem_tags()[static_cast<std::size_t>(t)]; }

const std::vector<std::string>& theorem_tags() {
  static const std::vector<std::string> tags{"main",    "ricci-flow", "height-bound",
                                             "bakry-emery", "neumann",  "dirichlet",
                                             "alpha-admissible"};
  return tags;
}

std::optional<Theorem> theorem_from_string(std::string_view s) {
  const auto& tags = theorem_tags();
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] == s) return static_cast<Theorem>(i);
  }
  return std::nullopt;
}

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Constant:
      return "constant";
    case InitialKind::Eigenfunction:
      return "eigenfunction";
    case InitialKind::Bandlimited:
      return "bandlimited";
    case InitialKind::Terms:
      return "terms";
    case InitialKind::Custom:
      return "custom";
  }
  return "custom";
}

Term parse_term(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon == std::string_view::npos ? colon : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 5) {
    throw PreconditionError("term must look like amplitude:f:kx:g:ky, got '" + std::string(text) + "'");
  }
  return {parse_double(parts[0], "amplitude"), parse_basis(parts[1]), parse_double(parts[2], "kx"),
          parse_basis(parts[3]), parse_double(parts[4], "ky")};
}

std::string format_term(const Term& t) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.17g:%s:%.17g:%s:%.17g", t.amplitude, t.fx.c_str(), t.kx,
                t.fy.c_str(), t.ky);
  return buf;
}

InitialProfile InitialProfile::constant(double c) {
  InitialProfile p;
  p.kind = InitialKind::Constant;
  p.value = c;
  return p;
}

InitialProfile InitialProfile::eigenfunction(double amplitude) {
  InitialProfile p;
  p.kind = InitialKind::Eigenfunction;
  p.amplitude = amplitude;
  return p;
}

InitialProfile InitialProfile::bandlimited(std::uint64_t seed, int modes, double amplitude) {
  InitialProfile p;
  p.kind = InitialKind::Bandlimited;
  p.seed = seed;
  p.modes = modes;
  p.amplitude = amplitude;
  return p;
}

InitialProfile InitialProfile::from_terms(std::vector<Term> terms) {
  InitialProfile p;
  p.kind = InitialKind::Terms;
  p.terms = std::move(terms);
  return p;
}

std::function<double(Point)> initial_function(const ManifoldModel& m, const InitialProfile& p) {
  switch (p.kind) {
    case InitialKind::Constant: {
      const double c = p.value;
      return [c](Point) { return c; };
    }
    case InitialKind::Eigenfunction: {
      const double a = p.amplitude;
      if (m.is<RoundSphere>()) return [a](Point q) { return a * std::cos(q.x); };
      const bool two_d = m.dimension() == 2;
      if (m.closed()) return terms_function(m, {{a, "sin", 1.0, "one", 0.0}});
      const std::string f = m.boundary() == Boundary::DirichletDomain ? "sin" : "cos";
      return terms_function(m, {{a, f, 1.0, two_d ? f : "one", two_d ? 1.0 : 0.0}});
    }
    case InitialKind::Bandlimited:
      return terms_function(m, bandlimited_terms(m, p));
    case InitialKind::Terms:
      return terms_function(m, p.terms);
    case InitialKind::Custom:
      if (!p.custom) throw PreconditionError("custom initial profile has no function");
      return p.custom;
  }
  throw PreconditionError("unknown initial profile");
}

double Supersolution::operator()(double s, double t) const {
  if (custom) return custom(s, t);
  if (kind == "power") return coefficient * std::pow(s, exponent);
  return slope * s;
}

std::string Supersolution::describe() const {
  char buf[128];
  if (custom) return "custom";
  if (kind == "power") {
    std::snprintf(buf, sizeof buf, "%.17g * s^%.17g", coefficient, exponent);
  } else {
    std::snprintf(buf, sizeof buf, "%.17g * s", slope);
  }
  return buf;
}

void ScenarioSpec::validate() const {
  if (id.empty()) throw PreconditionError("scenario id must not be empty");
  if (theorem == Theorem::AlphaAdmissible) {
    if (samples < 1) throw PreconditionError("alpha admissibility needs samples >= 1");
    if (alpha_dimension < 1) throw PreconditionError("alpha_dimension must be positive");
    return;
  }
  if (!(horizon > 0.0)) throw PreconditionError("horizon must be positive");
  if (checkpoints.empty()) throw PreconditionError("at least one checkpoint is required");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (!(checkpoints[i] > 0.0 && checkpoints[i] <= horizon)) {
      throw PreconditionError("checkpoints must lie in (0, horizon]");
    }
    if (i > 0 && !(checkpoints[i] > checkpoints[i - 1])) {
      throw PreconditionError("checkpoints must be strictly increasing");
    }
  }
  if (theorem == Theorem::RicciFlow) {
    const int n = manifold.dimension();
    if (!manifold.is<RoundSphere>() || n < 2) {
      throw PreconditionError("Ricci-flow scenarios run on a round sphere of dimension >= 2");
    }
    if (horizon >= 1.0 / (2.0 * (n - 1))) {
      throw PreconditionError("Ricci-flow horizon must stay below 1/(2(n-1))");
    }
  }
  if (!(epsilon > 0.0) && theorem != Theorem::Dirichlet && theorem != Theorem::HeightBound) {
    throw PreconditionError("epsilon lift must be positive");
  }
  if (!(cfl_safety > 0.0 && cfl_safety < 1.0)) throw PreconditionError("cfl_safety must lie in (0, 1)");
  if (!(dt_max > 0.0)) throw PreconditionError("dt_max must be positive");
  if (grid < 4) throw PreconditionError("grid must have at least 4 nodes");
}

std::vector<double> ScenarioSpec::times_with_start() const {
  std::vector<double> t{0.0};
  for (double c : checkpoints) {
    if (c > 0.0) t.push_back(c);
  }
  return t;
}

std::size_t ScenarioSpec::effective_bins() const {
  if (bins > 0) return bins;
  std::size_t b = 32;
  if (manifold.is<RoundSphere>() || (manifold.is<Interval>() && manifold.boundary() == Boundary::NeumannDomain)) {
    b = grid / 2;
  } else if (manifold.is<Circle>()) {
    b = grid / 4;
  } else if (manifold.is<Interval>()) {
    b = (grid - 1) / 2;
  }
  return std::max<std::size_t>(b, 2);
}

}  // namespace moclab
