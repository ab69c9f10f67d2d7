#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sqg/spectral_field.hpp"

namespace sqg {

enum class TimeScheme {
  IntegratingFactorRK2,  ///< exact dissipation, Heun's method on the rest
  Imex1,                 ///< backward Euler dissipation, forward Euler rest
};

struct DtPolicy {
  enum class Kind { Fixed, Cfl };
  Kind kind = Kind::Fixed;
  double dt = 1e-3;      ///< step for Kind::Fixed
  double safety = 0.5;   ///< CFL number for Kind::Cfl, in (0, 1)
  double dt_max = 1e-2;  ///< cap for Kind::Cfl
};

/// Parameters of the forced critical SQG problem
///   d_t theta + u . grad theta + kappa Lambda theta = f,  u = R^perp theta.
///
/// kappa = 0 is accepted as an inviscid diagnostic mode; everything else
/// requires 0 < kappa <= 1.
struct SolverConfig {
  double kappa = 1.0;
  TorusGrid grid{64};
  SpectralField forcing{TorusGrid{64}};
  DtPolicy dt;
  TimeScheme scheme = TimeScheme::IntegratingFactorRK2;
  bool dealias = true;
  double blowup_factor = 1e6;

  static SolverConfig make(double kappa, TorusGrid grid);
  void validate() const;
};

struct SolverState {
  SpectralField theta;
  double t = 0.0;
  std::uint64_t step = 0;
};

/// -(u . grad theta), dealiased by the two-thirds rule when requested.
SpectralField nonlinear_term(const SpectralField& theta, bool dealias = true);

/// Advect-and-dissipate integrator with reusable scratch space. Owned by a
/// single integration loop.
class Integrator {
 public:
  explicit Integrator(const SolverConfig& config);

  /// Advances by dt > 0. Throws SolverAbort on a non-finite state.
  void advance(SolverState& state, double dt);

  /// -(u . grad theta) with this integrator's dealiasing policy, no forcing.
  SpectralField transport(const SpectralField& theta);

  const SolverConfig& config() const noexcept { return config_; }

 private:
  void tendency(std::span<const Complex> theta, std::span<Complex> out, bool with_forcing = true);
  void apply_decay(std::span<Complex> v, double dt);

  SolverConfig config_;
  std::vector<double> rate_;  // kappa * 2 pi |k| per mode
  std::vector<unsigned char> keep_;
  std::vector<double> riesz1_, riesz2_, deriv1_, deriv2_;
  std::vector<Complex> theta_, n0_, n1_, stage_;
  std::vector<Complex> work_a_, work_b_, work_c_, work_d_;
  std::vector<double> phys_u1_, phys_u2_, phys_g1_, phys_g2_, phys_prod_;
  std::vector<double> decay_cache_;
  double decay_dt_ = -1.0;
};

/// One step of size dt from `state`.
SolverState step(const SolverConfig& config, const SolverState& state, double dt);

/// safety * (1/n) / max(||u||_Linf, 1e-8), capped at dt_max.
double cfl_dt(const SolverState& state, const SolverConfig& config);

/// Norms recorded at every sample time.
struct TrajectorySample {
  double t = 0.0;
  std::uint64_t step = 0;
  double l2 = 0.0;
  double linf = 0.0;
  double h1 = 0.0;
  double h32 = 0.0;
  double half_sq = 0.0;       ///< ||Lambda^{1/2} theta||^2
  double int_half_sq = 0.0;   ///< int_0^t ||Lambda^{1/2} theta||^2
  double int_h32_sq = 0.0;    ///< int_0^t ||theta||_{H^{3/2}}^2
  double int_work = 0.0;      ///< int_0^t (f, theta)
};

/// Time series of a trajectory plus optional full snapshots.
///
/// Integrals are accumulated at the stepping resolution, not the sampling
/// resolution. Dissipation integrals use the per-mode logarithmic mean of
/// |c_k|^2 over each step (exact for a freely decaying mode); the forcing
/// work uses the trapezoid rule.
struct TrajectoryRecord {
  double kappa = 0.0;
  SpectralField forcing{TorusGrid{8}};
  std::vector<TrajectorySample> samples;
  std::vector<SolverState> snapshots;
  std::vector<std::string> observer_errors;

  bool empty() const noexcept { return samples.empty(); }
  const TorusGrid& grid() const noexcept { return forcing.grid(); }

  /// Named series: l2, linf, h1, h32, half_sq, int_half_sq, int_h32_sq, int_work.
  std::vector<std::pair<double, double>> series(const std::string& name) const;
};

struct EvolveOptions {
  double sample_interval = 0.01;
  bool keep_snapshots = false;
  int snapshot_stride = 1;  ///< keep every k-th sample as a snapshot
  double dense_until = 0.0; ///< keep every sample as a snapshot while t - t_start <= dense_until
};

using Observer = std::function<void(const SolverState&)>;

/// Integrates from theta0 (at t = 0) to T, sampling at multiples of
/// sample_interval (the step is shortened to land on sample times).
/// Deterministic: a fixed config produces the same step sequence.
TrajectoryRecord evolve(const SolverConfig& config, const SpectralField& theta0, double T,
                        const EvolveOptions& options = {}, const std::vector<Observer>& observers = {});

/// Same as evolve() but starting from an existing state; the record's times
/// continue from state.t.
TrajectoryRecord evolve_from(const SolverConfig& config, SolverState& state, double duration,
                             const EvolveOptions& options = {}, const std::vector<Observer>& observers = {});

TrajectorySample measure(const SolverState& state);

}  // namespace sqg
