#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "sqg/solver.hpp"

namespace sqg {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary solver checkpoint, all fields little-endian:
///   "SQGC" | u32 version | u32 n | f64 kappa | f64 t | u64 step |
///   n*n (f64 re, f64 im) pairs, row-major in TorusGrid coefficient order.
struct Checkpoint {
  SolverState state;
  double kappa = 0.0;
};

void write_checkpoint(std::ostream& out, const SolverState& state, double kappa);
void write_checkpoint(const std::filesystem::path& path, const SolverState& state, double kappa);
Checkpoint read_checkpoint(std::istream& in);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace sqg
