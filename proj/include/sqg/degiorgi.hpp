#pragma once

#include <vector>

#include "sqg/ledger.hpp"
#include "sqg/report.hpp"
#include "sqg/solver.hpp"

namespace sqg {

/// Positive part (theta - level)_+ on the grid. Not band-limited and not
/// mean-free, so it keeps its mean next to the zero-mean fluctuation.
class TruncatedField {
 public:
  TruncatedField(TorusGrid grid, std::vector<double> samples);

  const TorusGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& samples() const noexcept { return samples_; }
  double mean() const noexcept { return mean_; }
  const SpectralField& fluctuation() const noexcept { return fluctuation_; }

  double l2_squared() const;
  double l1() const;
  /// ||Lambda^{1/2} (.)||^2, blind to the mean.
  double half_norm_squared() const;

 private:
  TorusGrid grid_;
  std::vector<double> samples_;
  double mean_ = 0.0;
  SpectralField fluctuation_;
};

/// (theta - level)_+ pointwise. Throws InputError for level < 0.
TruncatedField truncate(const SpectralField& theta, double level);

/// Truncation ladder over the time window [0, 2 t0]:
///   eta_k = M (1 - 2^-k),  tau_k = t0 (1 - 2^-k),
///   Q_k = sup_{[tau_k, 2 t0]} ||theta_k||^2 + 2 kappa int_{tau_k}^{2 t0} ||Lambda^{1/2} theta_k||^2.
struct DeGiorgiLadder {
  double M = 0.0;
  double t0 = 0.5;
  int k_max = 10;
  std::vector<double> eta;
  std::vector<double> tau;
  std::vector<double> Q;
  /// (2^k / t0) int_{tau_{k-1}}^{2t0} ||theta_k||^2 + 2 ||f||_Linf int ||theta_k||_L1, k >= 1.
  std::vector<double> audit_rhs;
  std::vector<double> ratio;  ///< Q_k / Q_{k-1}, 0 when both vanish
  std::size_t window_snapshots = 0;
  bool converged = false;     ///< Q_{k_max} < 1e-10 Q_0
  bool geometric = false;     ///< ratio <= 1/2 for every k >= 3
  bool audit_holds = false;   ///< Q_k <= audit_rhs_k for every k >= 1
};

inline constexpr std::size_t kMinWindowSnapshots = 64;

/// Runs the ladder on the stored snapshots. Requires snapshots covering
/// [0, 2 t0] with at least kMinWindowSnapshots in [t0, 2 t0].
DeGiorgiLadder degiorgi_ladder(const TrajectoryRecord& traj, double M, double t0 = 0.5, int k_max = 10);

struct DeGiorgiLevel {
  double M = 0.0;
  double c = 0.0;  ///< fitted constant of M >= (c / kappa) [||theta0||_L2 + kappa^{-1/2} ||f||_L2]
};

/// Threshold M = max(2 ||f||_Linf, (c / kappa)[||theta0|| + kappa^{-1/2} ||f||]) with c the
/// smallest constant for which theta stays below M on [tau_1, 2 t0].
DeGiorgiLevel degiorgi_auto_level(const TrajectoryRecord& traj, double t0 = 0.5);

/// Q_0 of the ladder (independent of M).
double degiorgi_q0(const TrajectoryRecord& traj, double t0 = 0.5);

CheckReport degiorgi_check(const DeGiorgiLadder& ladder, const std::string& name = "degiorgi");

}  // namespace sqg
