#pragma once

#include <cstdint>
#include <vector>

#include "sqg/envelope.hpp"
#include "sqg/ledger.hpp"
#include "sqg/norms.hpp"
#include "sqg/report.hpp"
#include "sqg/solver.hpp"

namespace sqg {

/// min(kappa / (c3 K_inf), 1/4). Throws InputError for K_inf <= 0 or c3 < 64.
double alpha_choice(double k_inf, double kappa, double c3 = 64.0);

/// xi(t) = [xi0^p - p t]^{1/p} for t < t_alpha and 0 afterwards, p = 2(1 - alpha)/3.
double xi_profile(double t, double alpha, double xi0);

/// Time at which xi reaches zero: xi0^p / p.
double t_alpha(double alpha, double xi0);

/// Largest relative residual of xi' = -xi^{(1 + 2 alpha)/3}, with xi' taken by
/// central differences at `points` interior times of (0, t_alpha).
double xi_ode_residual(double alpha, double xi0, int points = 200);

/// psi(t) = holder_seminorm(theta(t), xi = xi_profile(t))^2 per snapshot.
/// Snapshots are processed by `threads` workers; the result does not depend on it.
Series psi_series(const TrajectoryRecord& traj, double alpha, double xi0, double shift_radius = 0.25,
                  std::size_t max_shifts = 4096, int threads = 1);

/// [theta]_{C^alpha} (xi = 0) per snapshot.
Series holder_series(const TrajectoryRecord& traj, double alpha, double shift_radius = 0.25,
                     std::size_t max_shifts = 4096, int threads = 1);

/// [theta(t)]_{C^alpha} <= c K_inf for t >= t_alpha (xi0 = 1).
/// Reports the minimal c and the shift-set policy; fails if the
/// trajectory never reaches t_alpha or the seminorm is not finite.
/// `seminorms` may carry a precomputed holder_series for the same alpha.
CheckReport holder_bound_check(const TrajectoryRecord& traj, const ConstantsLedger& ledger, double alpha,
                               const Series* seminorms = nullptr);

/// ||theta(t)||_{C^alpha} <= [theta0]_{C^alpha} + c K_inf for all t >= 0.
CheckReport holder_propagation_check(const TrajectoryRecord& traj, const ConstantsLedger& ledger, double alpha,
                                     const Series* seminorms = nullptr);

/// psi(0) <= 4 ||theta0||_Linf^2 / xi0^{2 alpha} and sup_{t >= t_alpha} psi <= c K_inf^2.
CheckReport psi_check(const TrajectoryRecord& traj, const ConstantsLedger& ledger, double alpha, double xi0 = 1.0,
                      int threads = 1);

struct LowerBoundProbe {
  double lhs = 0.0;     ///< D[delta_h theta](x) / (xi^2 + |h|^2)^alpha
  double rhs = 0.0;     ///< |v(x;h)|^3 / (||theta||_Linf (xi^2 + |h|^2)^{(1 - alpha)/2})
  double c2_est = 0.0;  ///< rhs / lhs
};

/// Evaluates both sides of the nonlinear lower bound at one (x, h).
/// Throws InputError when delta_h theta(x) = 0.
LowerBoundProbe nonlinear_lower_bound_probe(const SpectralField& theta, GridPoint x, Shift h, double alpha,
                                            double xi);

struct LowerBoundSample {
  std::size_t evaluated = 0;
  std::size_t skipped = 0;  ///< degenerate points
  double c2_max = 0.0;
  double c2_median = 0.0;
};

/// Probes `count` random (x, h) pairs with shifts |h| <= 1/4.
LowerBoundSample sample_lower_bound(const SpectralField& theta, double alpha, double xi, std::size_t count,
                                    std::uint64_t seed);

/// D[grad theta](x) >= |grad theta(x)|^{(3 - alpha)/(1 - alpha)} / (c4 M^{1/(1 - alpha)}):
/// returns the smallest c4 over all grid points, M the C^alpha norm bound.
double fit_gradient_lower_bound(const SpectralField& theta, double alpha, double M);

}  // namespace sqg
