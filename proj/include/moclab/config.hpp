#pragma once

// Scenario suites in a small key-value format:
//
//   [run]
//   output = results
//   emit_plots = true
//
//   [scenario sphere-heat]
//   theorem = main
//   manifold = sphere
//   horizon = 0.5
//   checkpoints = 0.1, 0.25, 0.5
//
// The full grammar and key list live in docs/config.md.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "moclab/errors.hpp"
#include "moclab/scenario.hpp"

namespace moclab {

enum class ConfigErrorKind { Syntax, UnknownKey, MissingField, OutOfRange, UnknownEnum, Duplicate };

std::string to_string(ConfigErrorKind k);

class ConfigError : public Error {
 public:
  ConfigError(ConfigErrorKind kind, std::size_t line, std::size_t column, const std::string& message);

  ConfigErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  ConfigErrorKind kind_;
  std::size_t line_;
  std::size_t column_;
};

struct Config {
  std::vector<ScenarioSpec> scenarios;
  std::string output = "moclab-out";
  bool emit_plots = false;
  // Global overrides from [run]; applied to every scenario.
  std::optional<std::size_t> grid;
  std::optional<double> cfl_safety;
  std::optional<std::size_t> bins;
  std::uint64_t seed = 0;
  bool seed_overridden = false;
};

/// Throws ConfigError with a 1-based line and column.
Config parse_config(std::string_view text);

/// Reads and parses a file; I/O failures raise Error.
Config load_config(const std::string& path);

}  // namespace moclab
