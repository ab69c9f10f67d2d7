#pragma once

#include <utility>

#include "sqg/spectral_field.hpp"

namespace sqg {

/// Lambda^s = (-Laplacian)^{s/2}: multiplies mode k by (2 pi |k|)^s, s in [-2, 2].
SpectralField fractional_laplacian(const SpectralField& field, double s);

/// Perpendicular Riesz transform u = grad^perp Lambda^{-1} theta:
/// u1 = -i (k2/|k|) theta, u2 = i (k1/|k|) theta.
///
/// The unpaired Nyquist component of k is treated as zero in the odd
/// factors, which keeps both outputs real and divergence-free.
std::pair<SpectralField, SpectralField> riesz_velocity(const SpectralField& theta);

/// Spectral partial derivatives (d/dx1, d/dx2), Nyquist convention as above.
std::pair<SpectralField, SpectralField> gradient(const SpectralField& field);

/// Two-thirds rule: zero every mode with |k1| or |k2| above grid.dealias_cutoff().
SpectralField dealias(const SpectralField& field);

/// theta(. + h) for a grid shift h.
SpectralField shifted(const SpectralField& field, Shift h);

/// delta_h theta = theta(. + h) - theta.
SpectralField finite_difference(const SpectralField& field, Shift h);

/// Divergence residual max_k |2 pi k . u(k)| in spectral space.
double divergence_defect(const SpectralField& u1, const SpectralField& u2);

}  // namespace sqg
