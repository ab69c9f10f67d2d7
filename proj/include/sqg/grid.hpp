#pragma once

#include <cstddef>
#include <numbers>

namespace sqg {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform n x n grid on the unit torus [0,1)^2.
///
/// Physical samples are stored row-major with index j1 * n + j2 at
/// x = (j1 / n, j2 / n). Fourier coefficients use the same layout in FFT
/// order: index i maps to the integer wavenumber i for i < n/2 and i - n
/// otherwise, so row i1 carries k1 and column i2 carries k2.
class TorusGrid {
 public:
  explicit TorusGrid(int n);

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }
  double spacing() const noexcept { return 1.0 / n_; }

  int wavenumber(int index) const noexcept { return index < n_ / 2 ? index : index - n_; }
  int index_of(int k) const noexcept { return ((k % n_) + n_) % n_; }
  std::size_t flat(int i1, int i2) const noexcept {
    return static_cast<std::size_t>(i1) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i2);
  }
  std::size_t flat_mode(int k1, int k2) const noexcept { return flat(index_of(k1), index_of(k2)); }

  /// Largest |k_j| kept by the two-thirds rule (3 * cutoff < n).
  int dealias_cutoff() const noexcept { return (n_ - 1) / 3; }

  /// True for the unpaired k_j = -n/2 row or column.
  bool is_nyquist(int k) const noexcept { return k == -n_ / 2; }

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  int n_;
};

/// Grid point (j1, j2), x = (j1 / n, j2 / n).
struct GridPoint {
  int j1 = 0;
  int j2 = 0;
};

/// Displacement by (m1, m2) grid cells.
struct Shift {
  int m1 = 0;
  int m2 = 0;
};

}  // namespace sqg
