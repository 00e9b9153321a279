#pragma once

// Batch experiments behind the command-line front end. One config file describes one run; the
// runner writes <out>/<command>.csv and .json (deterministic for a fixed config and seed) plus
// <out>/<command>.meta.json holding timestamps and wall times.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "clrlab/config.hpp"

namespace clrlab::experiments {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalFailure = 2, kInvariantViolation = 3 };

struct RunOptions {
  int workers = 0;  // 0: hardware concurrency
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
};

struct RunOutcome {
  int exit_code = kOk;
  std::string message;  // summary line, or the diagnostic when exit_code != 0
  std::vector<std::filesystem::path> files;
};

/// Runs an already-parsed config. Never throws for failures inside the experiment; they map
/// to exit codes 2 and 3.
RunOutcome run_experiment(const config::ExperimentConfig& cfg, const RunOptions& opts);

/// Loads and runs; file list and success go to `out`, diagnostics to `err`. Returns the exit status.
int run(const std::filesystem::path& config_file, const RunOptions& opts, std::ostream& out,
        std::ostream& err);

std::string list_catalog(bool json);

}  // namespace clrlab::experiments
