#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "moclab/config.hpp"
#include "moclab/harness.hpp"
#include "moclab/plot.hpp"

int main(int argc, char** argv) {
  CLI::App app{"moclab: numerical checks of modulus-of-continuity estimates"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run every scenario of a config file");
  run->add_option("config", config_path, "scenario config")->required();
  std::string output;
  run->add_option("-o,--output", output, "override the [run] output directory");

  bool verbose = false;
  auto* list = app.add_subcommand("list", "print the built-in scenarios");
  list->add_flag("-v,--verbose", verbose, "include each config block");

  std::string plot_dir;
  auto* plot = app.add_subcommand("plot", "render plot_<k>.svg from a scenario output directory");
  plot->add_option("dir", plot_dir, "scenario output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : moclab::kExitConfig;
  }

  if (*list) {
    std::cout << moclab::list_scenarios(verbose);
    return 0;
  }

  if (*plot) {
    try {
      for (const auto& p : moclab::emit_plots(plot_dir)) std::cout << p.string() << "\n";
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return moclab::kExitRuntime;
    }
  }

  moclab::Config cfg;
  try {
    cfg = moclab::load_config(config_path);
  } catch (const moclab::ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return moclab::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return moclab::kExitRuntime;
  }
  if (!output.empty()) cfg.output = output;
  const auto summary = moclab::run(cfg, std::cerr);
  return summary.exit_code;
}
