#include "moclab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "moclab/errors.hpp"

namespace moclab {
namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name, const std::string& file) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw PreconditionError(file + " has no '" + name + "' column");
    return static_cast<std::size_t>(it - header.begin());
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Table parse_csv(const std::string& text, const std::string& file) {
  Table t;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (n == 1) {
      t.header = split(line);
      if (t.header.empty()) throw PreconditionError(file + ": empty header");
      continue;
    }
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size()) {
      throw PreconditionError(file + " line " + std::to_string(n) + ": expected " +
                              std::to_string(t.header.size()) + " fields, found " +
                              std::to_string(cells.size()));
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size()) {
        throw PreconditionError(file + " line " + std::to_string(n) + ": '" + c + "' is not a number");
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (n == 0) throw PreconditionError(file + " is empty");
  return t;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 24.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 48.0;

}  // namespace

std::vector<PlotPanel> read_panels(const std::string& modulus_csv, const std::string& comparison_csv) {
  const Table mod = parse_csv(modulus_csv, "modulus.csv");
  const Table cmp = parse_csv(comparison_csv, "comparison.csv");
  const std::size_t mt = mod.column("t", "modulus.csv");
  const std::size_t ms = mod.column("s", "modulus.csv");
  const std::size_t mraw = mod.column("w_raw", "modulus.csv");
  const std::size_t ct = cmp.column("t", "comparison.csv");
  const std::size_t cs = cmp.column("s", "comparison.csv");
  const std::size_t cphi = cmp.column("phi", "comparison.csv");
  const std::size_t cenv = cmp.column("w_envelope", "comparison.csv");

  // Times are written with full precision, so exact keys are stable.
  std::map<double, PlotPanel> panels;
  for (const auto& r : mod.rows) {
    PlotPanel& p = panels[r[mt]];
    p.time = r[mt];
    p.w_raw.s.push_back(r[ms]);
    p.w_raw.values.push_back(r[mraw]);
  }
  for (const auto& r : cmp.rows) {
    PlotPanel& p = panels[r[ct]];
    p.time = r[ct];
    p.phi.s.push_back(r[cs]);
    p.phi.values.push_back(r[cphi]);
    p.w_envelope.s.push_back(r[cs]);
    p.w_envelope.values.push_back(r[cenv]);
  }
  std::vector<PlotPanel> out;
  for (auto& [t, p] : panels) out.push_back(std::move(p));
  return out;
}

std::string render_svg(const PlotPanel& panel) {
  const PlotSeries* series[3] = {&panel.w_raw, &panel.w_envelope, &panel.phi};
  double s_hi = 0.0;
  double v_lo = 0.0;
  double v_hi = 0.0;
  for (const PlotSeries* s : series) {
    for (double x : s->s) {
      if (std::isfinite(x)) s_hi = std::max(s_hi, x);
    }
    for (double v : s->values) {
      if (!std::isfinite(v)) continue;
      v_lo = std::min(v_lo, v);
      v_hi = std::max(v_hi, v);
    }
  }
  if (s_hi <= 0.0) s_hi = 1.0;
  if (v_hi - v_lo <= 0.0) v_hi = v_lo + 1.0;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double s) { return kLeft + pw * s / s_hi; };
  auto py = [&](double v) { return kTop + ph * (1.0 - (v - v_lo) / (v_hi - v_lo)); };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  o << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  o << "<text x=\"320\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">t = "
    << fmt("%.6g", panel.time) << "</text>\n";
  o << "<g stroke=\"black\" stroke-width=\"1\">\n";
  o << "<line x1=\"" << fmt("%.2f", kLeft) << "\" y1=\"" << fmt("%.2f", kTop + ph) << "\" x2=\""
    << fmt("%.2f", kLeft + pw) << "\" y2=\"" << fmt("%.2f", kTop + ph) << "\"/>\n";
  o << "<line x1=\"" << fmt("%.2f", kLeft) << "\" y1=\"" << fmt("%.2f", kTop) << "\" x2=\""
    << fmt("%.2f", kLeft) << "\" y2=\"" << fmt("%.2f", kTop + ph) << "\"/>\n";
  o << "</g>\n";
  o << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double s = s_hi * k / 4.0;
    const double v = v_lo + (v_hi - v_lo) * k / 4.0;
    o << "<text x=\"" << fmt("%.2f", px(s)) << "\" y=\"" << fmt("%.2f", kTop + ph + 16.0)
      << "\" text-anchor=\"middle\">" << fmt("%.4g", s) << "</text>\n";
    o << "<text x=\"" << fmt("%.2f", kLeft - 6.0) << "\" y=\"" << fmt("%.2f", py(v) + 4.0)
      << "\" text-anchor=\"end\">" << fmt("%.4g", v) << "</text>\n";
  }
  o << "<text x=\"" << fmt("%.2f", kLeft + pw / 2.0) << "\" y=\"" << fmt("%.2f", kHeight - 8.0)
    << "\" text-anchor=\"middle\">s</text>\n";
  o << "</g>\n";

  const char* names[3] = {"w_raw", "w_envelope", "phi"};
  const char* colors[3] = {"#1f77b4", "#2ca02c", "#d62728"};
  const char* dashes[3] = {"", " stroke-dasharray=\"6 3\"", ""};
  for (int k = 0; k < 3; ++k) {
    const PlotSeries& s = *series[k];
    o << "<polyline fill=\"none\" stroke=\"" << colors[k] << "\" stroke-width=\"1.5\"" << dashes[k]
      << " points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.s.size(); ++i) {
      if (!std::isfinite(s.s[i]) || !std::isfinite(s.values[i])) continue;
      o << (first ? "" : " ") << fmt("%.2f", px(s.s[i])) << "," << fmt("%.2f", py(s.values[i]));
      first = false;
    }
    o << "\"/>\n";
    const double ly = kTop + 14.0 + 16.0 * k;
    o << "<line x1=\"" << fmt("%.2f", kLeft + 12.0) << "\" y1=\"" << fmt("%.2f", ly) << "\" x2=\""
      << fmt("%.2f", kLeft + 36.0) << "\" y2=\"" << fmt("%.2f", ly) << "\" stroke=\"" << colors[k]
      << "\" stroke-width=\"1.5\"" << dashes[k] << "/>\n";
    o << "<text x=\"" << fmt("%.2f", kLeft + 42.0) << "\" y=\"" << fmt("%.2f", ly + 4.0)
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << names[k] << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& dir) {
  const auto cmp = dir / "comparison.csv";
  if (!std::filesystem::exists(cmp)) throw PreconditionError("no comparison.csv in " + dir.string());
  const auto panels = read_panels(slurp(dir / "modulus.csv"), slurp(cmp));
  std::vector<std::filesystem::path> written;
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const auto path = dir / ("plot_" + std::to_string(k) + ".svg");
    std::ofstream out(path, std::ios::binary);
    out << render_svg(panels[k]);
    if (!out) throw Error("cannot write " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace moclab
