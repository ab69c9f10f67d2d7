#pragma once

#include <span>
#include <vector>

#include "sqg/fft.hpp"
#include "sqg/grid.hpp"

namespace sqg {

/// Zero-mean real scalar field on the torus, held as Fourier coefficients.
///
/// Invariants: coefficient at k = 0 is exactly zero, and the coefficient at
/// -k is the conjugate of the one at k (so physical samples are real).
/// Fields are immutable values; every operation returns a new field.
class SpectralField {
 public:
  explicit SpectralField(TorusGrid grid);

  /// Takes ownership of a full n x n coefficient array. The zero mode is
  /// cleared and the array is projected onto its Hermitian part.
  static SpectralField from_coefficients(TorusGrid grid, std::vector<Complex> coeffs);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> coefficients() const noexcept { return coeffs_; }
  Complex mode(int k1, int k2) const { return coeffs_[grid_.flat_mode(k1, k2)]; }

  /// Physical samples, row-major (j1, j2).
  std::vector<double> samples() const;

  bool is_zero() const noexcept;

  /// Largest |c(-k) - conj(c(k))|; zero up to round-off.
  double hermitian_defect() const noexcept;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
  friend bool operator==(const SpectralField&, const SpectralField&) = default;

  /// Trusted construction for internal kernels that already maintain the
  /// invariants (zero mode is still cleared).
  static SpectralField adopt(TorusGrid grid, std::vector<Complex> coeffs);

 private:
  SpectralField(TorusGrid grid, std::vector<Complex> coeffs);

  TorusGrid grid_;
  std::vector<Complex> coeffs_;
};

struct ForwardResult {
  SpectralField field;
  double mean = 0.0;
};

/// Transforms real samples (row-major n x n) and strips their mean.
/// Throws InputError on a non-finite sample or a size that is not n*n.
ForwardResult forward_transform(std::span<const double> samples, TorusGrid grid);

std::vector<double> inverse_transform(const SpectralField& field);

/// Samples on an m-times finer grid by zero padding (the Nyquist row and
/// column are split evenly between +-n/2).
std::vector<double> oversampled_samples(const SpectralField& field, int factor);

/// Sum of a*cos(2 pi k.x) + b*sin(2 pi k.x) terms.
struct FourierMode {
  int k1 = 0;
  int k2 = 0;
  double cos_amp = 0.0;
  double sin_amp = 0.0;
};

SpectralField field_from_modes(TorusGrid grid, std::span<const FourierMode> modes);

/// Band-limited random-phase field: |c(k)| proportional to |k|^-slope for
/// 0 < |k| <= kmax, phases drawn from a seeded mt19937_64. The coefficient
/// pattern depends only on (seed, kmax, slope), not on the grid.
SpectralField random_band_limited(TorusGrid grid, unsigned long long seed, double kmax, double slope = 0.0);

/// Same field resampled on another grid (modes outside the target grid are dropped).
SpectralField regrid(const SpectralField& field, TorusGrid target);

}  // namespace sqg
