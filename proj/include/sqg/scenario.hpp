#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sqg/diagnostics.hpp"
#include "sqg/solver.hpp"

namespace sqg {

struct ForcingSpec {
  std::vector<FourierMode> modes;  ///< empty: zero forcing
};

struct InitialSpec {
  enum class Kind { Modes, Random, Checkpoint };
  Kind kind = Kind::Modes;
  std::vector<FourierMode> modes;
  std::uint64_t seed = 0;
  double kmax = 4.0;
  double slope = 1.0;
  double amplitude = 1.0;  ///< random: target norm value
  std::string norm = "linf";  ///< random: norm the amplitude refers to (linf or l2)
  std::filesystem::path checkpoint;
  double scale = 1.0;  ///< multiplies the field after construction
};

struct ContinuitySpec {
  int k1 = 5;
  int k2 = 3;
  double epsilon = 1e-6;
  double T = 1.0;
};

/// Parsed, validated scenario. Every run is reproducible from the text it
/// was parsed from, which is kept verbatim in `source`.
struct ScenarioSpec {
  std::string name;
  int n = 64;
  double kappa = 1.0;
  double T = 1.0;
  DtPolicy dt;
  TimeScheme scheme = TimeScheme::IntegratingFactorRK2;
  bool dealias = true;
  ForcingSpec forcing;
  InitialSpec initial;
  double sample_interval = 0.01;
  int snapshot_stride = 10;
  double dense_until = 0.0;
  bool save_snapshots = true;
  std::string directory;  ///< output directory relative to the output root
  std::vector<std::string> checks;
  CheckOptions check_options;
  std::optional<ContinuitySpec> continuity;
  std::string source;
  std::filesystem::path base_dir;  ///< resolves relative checkpoint paths

  SolverConfig solver_config() const;
  SpectralField initial_field() const;
  /// SHA-256 of the source text, lowercase hex.
  std::string hash() const;
};

/// Parses the line-oriented `[section]` / `key = value` format. Unknown
/// sections or keys, malformed values and failed validation throw
/// ConfigError naming the offending field.
ScenarioSpec parse_scenario(const std::string& text, const std::filesystem::path& base_dir = ".");

ScenarioSpec load_scenario(const std::filesystem::path& path);

/// SHA-256 of a byte string, lowercase hex.
std::string sha256_hex(const std::string& bytes);

}  // namespace sqg
