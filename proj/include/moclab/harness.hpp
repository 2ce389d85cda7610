#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "moclab/config.hpp"
#include "moclab/verifier.hpp"

namespace moclab {

enum ExitCode : int { kExitPass = 0, kExitViolation = 1, kExitConfig = 2, kExitRuntime = 3 };

struct ScenarioResult {
  std::string id;
  bool ok = false;  // false: the job threw; error holds the message
  std::string error;
  VerificationReport report;
};

struct RunSummary {
  std::vector<ScenarioResult> results;  // config order
  int exit_code = kExitPass;
};

/// 3 if any job failed at runtime, else 1 if any report fails, else 0.
int exit_code_for(const std::vector<ScenarioResult>& results);

/// Writes modulus.csv, comparison.csv and report.json into dir.
void write_outcome(const std::filesystem::path& dir, const Outcome& outcome);

/// Runs every scenario of the config into <output>/<id>/ and writes
/// <output>/summary.csv once all jobs are done. Progress goes to log.
RunSummary run(const Config& config, std::ostream& log);

/// Worker count: min(jobs, MOCLAB_THREADS or hardware concurrency), at least 1.
std::size_t worker_count(std::size_t jobs);

struct Preset {
  std::string id;
  std::string summary;
  std::string config_text;  // one [scenario <id>] block
};

const std::vector<Preset>& builtin_scenarios();
const Preset* find_preset(const std::string& id);

/// Text table of the registry; verbose appends each config block.
std::string list_scenarios(bool verbose = false);

}  // namespace moclab
