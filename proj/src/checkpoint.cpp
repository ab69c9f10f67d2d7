#include "sqg/checkpoint.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "sqg/error.hpp"

namespace sqg {
namespace {

template <class T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
  if (!in) {
    throw InputError("checkpoint truncated");
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_checkpoint(std::ostream& out, const SolverState& state, double kappa) {
  out.write("SQGC", 4);
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(state.theta.grid().n()));
  put_le<double>(out, kappa);
  put_le<double>(out, state.t);
  put_le<std::uint64_t>(out, state.step);
  for (const auto& c : state.theta.coefficients()) {
    put_le<double>(out, c.real());
    put_le<double>(out, c.imag());
  }
  if (!out) {
    throw InputError("checkpoint write failed");
  }
}

void write_checkpoint(const std::filesystem::path& path, const SolverState& state, double kappa) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw InputError("cannot open checkpoint for writing: " + path.string());
  }
  write_checkpoint(out, state, kappa);
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "SQGC", 4) != 0) {
    throw InputError("not a checkpoint (bad magic)");
  }
  const auto version = get_le<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw InputError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto n = get_le<std::uint32_t>(in);
  const TorusGrid grid(static_cast<int>(n));
  Checkpoint ck{SolverState{SpectralField(grid), 0.0, 0}, 0.0};
  ck.kappa = get_le<double>(in);
  ck.state.t = get_le<double>(in);
  ck.state.step = get_le<std::uint64_t>(in);
  std::vector<Complex> coeffs(grid.size());
  for (auto& c : coeffs) {
    const double re = get_le<double>(in);
    const double im = get_le<double>(in);
    c = Complex(re, im);
  }
  ck.state.theta = SpectralField::adopt(grid, std::move(coeffs));
  return ck;
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open checkpoint: " + path.string());
  }
  return read_checkpoint(in);
}

}  // namespace sqg
