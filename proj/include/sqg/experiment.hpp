#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sqg/diagnostics.hpp"
#include "sqg/scenario.hpp"

namespace sqg {

enum ExitCode : int { kExitPass = 0, kExitCheckFail = 1, kExitConfigError = 2, kExitSolverAbort = 3 };

struct RunManifest {
  std::string scenario;
  std::string spec_hash;
  std::string code_version;
  std::string started;   ///< UTC, ISO 8601
  std::string finished;
  std::string status;    ///< pass, fail or solver_abort
  int exit_code = kExitPass;
  std::vector<CheckReport> reports;
  ConstantsLedger ledger;
  std::vector<std::string> artifacts;  ///< paths relative to the output directory
  std::filesystem::path directory;
  std::string error;

  std::string to_json() const;
};

struct RunOptions {
  std::filesystem::path output_root;  ///< empty: $SQG_OUTPUT_ROOT, else the current directory
  int threads = 1;
};

/// Resolves the output root: explicit option, then SQG_OUTPUT_ROOT, then ".".
std::filesystem::path resolve_output_root(const std::filesystem::path& requested);

/// Evolves the scenario, runs its checks and writes
///   spec.cfg, trajectory.csv, series/<name>.csv, forcing.ckpt, initial.ckpt,
///   final.ckpt, snapshots/*.ckpt, reports.txt, manifest.json (written last, atomically).
/// A solver abort keeps the samples gathered so far and sets exit code 3.
RunManifest run_experiment(const ScenarioSpec& spec, const RunOptions& options = {});

/// Reads a run directory back into a trajectory (samples, forcing, kappa, snapshots).
TrajectoryRecord load_trajectory(const std::filesystem::path& directory);

/// Writes a "t,value" CSV with %.17g numbers.
void write_series_csv(const std::filesystem::path& path, const Series& series);

/// Reads a "t,value" CSV (header optional).
Series read_series_csv(const std::filesystem::path& path);

}  // namespace sqg
