#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rcm/harness/config.hpp"
#include "rcm/harness/records.hpp"

namespace rcm::harness {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitBoundExceeded = 3,
  kExitStatisticalFailure = 4,
};

struct RunResult {
  std::vector<ResultRecord> records;
  /// Human-readable reasons for a statistical failure; empty on success.
  std::vector<std::string> failures;
  int status() const noexcept { return failures.empty() ? kExitOk : kExitStatisticalFailure; }
};

/// Runs the experiment named by cfg.experiment. Deterministic given the seed
/// apart from wall-clock times. Throws ConfigError for invalid configurations
/// and EnumerationBoundError when an exact computation is too large.
RunResult run(const ExperimentConfig& cfg);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::optional<int> threads;
};

/// Loads the config, checks it names `kind` (or sets it), runs, writes the CSV
/// and maps every failure to an exit code. Messages go to `log`.
int execute(ExperimentKind kind, const std::string& config_path, const RunOptions& options, std::ostream& log);

}  // namespace rcm::harness
