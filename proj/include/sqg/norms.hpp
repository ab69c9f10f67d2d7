#pragma once

#include <vector>

#include "sqg/spectral_field.hpp"

namespace sqg {

/// Homogeneous H^s norm (sum (2 pi |k|)^{2s} |c(k)|^2)^{1/2}, s in [0, 2].
/// Equals the full H^s norm since the mean is zero; s = 0 is the L2 norm.
double hs_norm(const SpectralField& field, double s);

/// Squared H^s norm (avoids a sqrt in the stepping loop).
double hs_norm_squared(const SpectralField& field, double s);

/// Maximum of |samples|, evaluated on the grid refined by `oversample`.
/// A grid maximum never exceeds the true supremum.
double linf_norm(const SpectralField& field, int oversample = 1);

/// Shift set and weighting for the Holder quotient
///   |theta(x+h) - theta(x)| / (xi^2 + |h|^2)^{alpha/2}.
///
/// Shifts are integer offsets on a grid of grid_n points per side
/// (grid_n = field n times oversample); |h| is the torus distance. Only one
/// of each pair +-h is stored since both give the same set of differences.
struct HolderProbeConfig {
  double alpha = 0.25;
  double xi = 0.0;
  int grid_n = 0;
  int oversample = 1;
  std::vector<Shift> shifts;

  /// Throws InputError on alpha outside (0, 1/4], xi < 0, an empty set, a
  /// shift longer than 1/2, or h = 0 together with xi = 0.
  void validate() const;
};

/// All half-plane grid offsets with 0 < |h| <= radius, deterministically
/// strided down to at most max_shifts entries (shortest shifts kept first).
std::vector<Shift> default_shift_set(int grid_n, double radius = 0.25, std::size_t max_shifts = 4096);

HolderProbeConfig make_holder_probe(const TorusGrid& grid, double alpha, double xi, double radius = 0.25,
                                    int oversample = 1, std::size_t max_shifts = 4096);

/// max over x and probe shifts of the Holder quotient; with xi = 0 this is
/// the discrete C^alpha seminorm.
double holder_seminorm(const SpectralField& field, const HolderProbeConfig& probe);

/// Torus length of a grid shift on an n-point grid.
double shift_length(Shift h, int grid_n);

}  // namespace sqg
