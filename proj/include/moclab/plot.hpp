#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace moclab {

struct PlotSeries {
  std::vector<double> s;
  std::vector<double> values;
};

struct PlotPanel {
  double time = 0.0;
  PlotSeries w_raw;
  PlotSeries w_envelope;
  PlotSeries phi;
};

/// Groups modulus.csv and comparison.csv rows by checkpoint time. Throws
/// PreconditionError on malformed input or a missing column.
std::vector<PlotPanel> read_panels(const std::string& modulus_csv, const std::string& comparison_csv);

/// Deterministic SVG text for one panel.
std::string render_svg(const PlotPanel& panel);

/// Writes plot_<k>.svg for each checkpoint found in dir; returns the paths.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& dir);

}  // namespace moclab
