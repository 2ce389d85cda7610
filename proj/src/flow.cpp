#include "moclab/flow.hpp"

#include <cmath>
#include <numbers>

#include "moclab/errors.hpp"

namespace moclab {

std::string to_string(FlowPreset preset) {
  switch (preset) {
    case FlowPreset::Heat:
      return "heat";
    case FlowPreset::GraphicalMCF:
      return "graphical-mcf";
    case FlowPreset::PLaplacian:
      return "p-laplacian";
    case FlowPreset::Custom:
      return "custom";
  }
  return "custom";
}

DriftPotential cosine_potential(double amplitude, double period, int wavenumber) {
  if (!(period > 0.0)) throw PreconditionError("drift potential period must be positive");
  const double k = 2.0 * std::numbers::pi * wavenumber / period;
  DriftPotential f;
  f.value = [=](Point p) { return amplitude * std::cos(k * p.x); };
  f.gradient = [=](Point p) { return std::array<double, 2>{-amplitude * k * std::sin(k * p.x), 0.0}; };
  f.hessian = [=](Point p) {
    return std::array<double, 3>{-amplitude * k * k * std::cos(k * p.x), 0.0, 0.0};
  };
  f.description = "cosine(amplitude=" + std::to_string(amplitude) +
                  ", wavenumber=" + std::to_string(wavenumber) + ")";
  return f;
}

FlowSpec FlowSpec::heat() {
  FlowSpec s;
  s.alpha = [](double, double, double) { return 1.0; };
  s.beta = [](double, double) { return 1.0; };
  s.preset = FlowPreset::Heat;
  s.beta_uses_gradient = false;
  return s;
}

FlowSpec FlowSpec::graphical_mcf() {
  FlowSpec s;
  s.alpha = [](double q, double, double) { return 1.0 / (1.0 + q * q); };
  s.beta = [](double, double) { return 1.0; };
  s.preset = FlowPreset::GraphicalMCF;
  s.beta_uses_gradient = false;
  return s;
}

FlowSpec FlowSpec::p_laplacian(double p) {
  if (!(p > 2.0)) throw PreconditionError("p-Laplacian preset requires p > 2");
  FlowSpec s;
  s.alpha = [p](double q, double, double) { return (p - 1.0) * std::pow(q, p - 2.0); };
  s.beta = [p](double q, double) { return std::pow(q, p - 2.0); };
  s.preset = FlowPreset::PLaplacian;
  s.p = p;
  return s;
}

}  // namespace moclab
