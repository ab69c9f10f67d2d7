#pragma once

#include <span>
#include <vector>

#include "sqg/spectral_field.hpp"

namespace sqg {

/// Normalization of D[phi](x) = c int_{R^2} (phi(x) - phi(x+y))^2 / |y|^3 dy
/// that makes (1/2) int D[phi] = int phi Lambda phi.
inline constexpr double kDissipationConstant = 1.0 / kTwoPi;

/// Quadrature controls for D.
///
/// The R^2 integral is summed over grid offsets inside the square of
/// (2 * images + 1)^2 periodic cells, with half weights on its boundary.
/// Near y = 0 the leading Taylor term (grad phi . y)^2 is subtracted under a
/// Gaussian of width taper_cells grid cells and added back in closed form.
/// Beyond the box the integrand is replaced by its cell average.
struct DissipationQuadrature {
  int images = 1;
  double taper_cells = 4.0;
};

/// D[phi] at one grid point.
double dissipation_density(const SpectralField& phi, GridPoint x, const DissipationQuadrature& quad = {});

/// D[phi] at every grid point (row-major).
std::vector<double> dissipation_density_map(const SpectralField& phi, const DissipationQuadrature& quad = {});

/// D[grad phi] = D[d1 phi] + D[d2 phi] at every grid point.
std::vector<double> gradient_dissipation_map(const SpectralField& phi, const DissipationQuadrature& quad = {});

struct DissipationCheck {
  double quadrature = 0.0;  ///< (1/2) torus integral of D[grad phi]
  double spectral = 0.0;    ///< ||phi||_{H^{3/2}}^2
  double rel_err = 0.0;     ///< 0 when both vanish
};

DissipationCheck dissipation_integral_check(const SpectralField& field, const DissipationQuadrature& quad = {});

}  // namespace sqg
