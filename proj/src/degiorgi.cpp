#include "sqg/degiorgi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sqg/envelope.hpp"
#include "sqg/error.hpp"
#include "sqg/norms.hpp"

namespace sqg {

TruncatedField::TruncatedField(TorusGrid grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)), fluctuation_(grid) {
  ForwardResult fr = forward_transform(samples_, grid_);
  mean_ = fr.mean;
  fluctuation_ = std::move(fr.field);
}

double TruncatedField::l2_squared() const {
  double acc = 0.0;
  for (double v : samples_) acc += v * v;
  return acc / static_cast<double>(samples_.size());
}

double TruncatedField::l1() const {
  double acc = 0.0;
  for (double v : samples_) acc += std::abs(v);
  return acc / static_cast<double>(samples_.size());
}

double TruncatedField::half_norm_squared() const { return hs_norm_squared(fluctuation_, 0.5); }

TruncatedField truncate(const SpectralField& theta, double level) {
  if (!(level >= 0.0)) throw InputError("truncate: level must be >= 0");
  std::vector<double> s = theta.samples();
  for (double& v : s) v = std::max(v - level, 0.0);
  return TruncatedField(theta.grid(), std::move(s));
}

namespace {

struct LevelSeries {
  Series l2sq, half, l1;
};

LevelSeries level_series(const std::vector<const SolverState*>& snaps, double level) {
  LevelSeries out;
  for (const SolverState* s : snaps) {
    std::vector<double> samples = s->theta.samples();
    bool any = false;
    for (double& v : samples) {
      v = std::max(v - level, 0.0);
      any = any || v > 0.0;
    }
    if (!any) {
      out.l2sq.emplace_back(s->t, 0.0);
      out.half.emplace_back(s->t, 0.0);
      out.l1.emplace_back(s->t, 0.0);
      continue;
    }
    TruncatedField tf(s->theta.grid(), std::move(samples));
    out.l2sq.emplace_back(s->t, tf.l2_squared());
    out.half.emplace_back(s->t, tf.half_norm_squared());
    out.l1.emplace_back(s->t, tf.l1());
  }
  return out;
}

double sup_on(const Series& s, double a, double b) {
  double m = 0.0;
  for (const auto& [t, v] : s)
    if (t >= a - 1e-12 && t <= b + 1e-12) m = std::max(m, v);
  return m;
}

std::vector<const SolverState*> window_snapshots(const TrajectoryRecord& traj, double t0, double& t_start) {
  if (traj.snapshots.empty()) throw InputError("degiorgi: trajectory has no snapshots");
  t_start = traj.snapshots.front().t;
  const double end = t_start + 2.0 * t0;
  if (traj.snapshots.back().t < end - 1e-9)
    throw InputError("degiorgi: snapshots must cover [0, 2 t0]; last snapshot at " +
                     std::to_string(traj.snapshots.back().t - t_start));
  std::vector<const SolverState*> out;
  std::size_t in_half = 0;
  for (const auto& s : traj.snapshots) {
    if (s.t > end + 1e-9) break;
    out.push_back(&s);
    if (s.t >= t_start + t0 - 1e-9) ++in_half;
  }
  if (in_half < kMinWindowSnapshots)
    throw InputError("degiorgi: need at least " + std::to_string(kMinWindowSnapshots) +
                     " snapshots in [t0, 2 t0], found " + std::to_string(in_half) +
                     "; snapshot spacing must be <= " + std::to_string(t0 / (kMinWindowSnapshots - 1)));
  return out;
}

}  // namespace

DeGiorgiLadder degiorgi_ladder(const TrajectoryRecord& traj, double M, double t0, int k_max) {
  if (!(M > 0.0)) throw InputError("degiorgi: M must be positive");
  if (!(t0 > 0.0 && t0 <= 1.0)) throw InputError("degiorgi: t0 must lie in (0, 1]");
  if (k_max < 1 || k_max > 60) throw InputError("degiorgi: k_max must lie in [1, 60]");
  double ts = 0.0;
  const auto snaps = window_snapshots(traj, t0, ts);
  const double end = ts + 2.0 * t0;
  const double kappa = traj.kappa;
  const double f_inf = linf_norm(traj.forcing);

  DeGiorgiLadder L;
  L.M = M;
  L.t0 = t0;
  L.k_max = k_max;
  L.window_snapshots = snaps.size();
  for (int k = 0; k <= k_max; ++k) {
    const double p = std::ldexp(1.0, -k);
    L.eta.push_back(M * (1.0 - p));
    L.tau.push_back(t0 * (1.0 - p));
  }
  for (int k = 0; k <= k_max; ++k) {
    const LevelSeries ls = level_series(snaps, L.eta[k]);
    const double a = ts + L.tau[k];
    L.Q.push_back(sup_on(ls.l2sq, a, end) + 2.0 * kappa * integrate_series(ls.half, a, end));
    if (k >= 1) {
      const double b = ts + L.tau[k - 1];
      const double avg = 1.0 / (L.tau[k] - L.tau[k - 1]);
      L.audit_rhs.push_back(avg * integrate_series(ls.l2sq, b, end) + 2.0 * f_inf * integrate_series(ls.l1, b, end));
      const double prev = L.Q[k - 1];
      L.ratio.push_back(prev > 0.0 ? L.Q[k] / prev : 0.0);
    }
  }
  const double q0 = L.Q.front();
  L.converged = q0 == 0.0 ? true : L.Q.back() < 1e-10 * q0;
  L.geometric = true;
  for (int k = 3; k <= k_max; ++k)
    if (L.ratio[k - 1] > 0.5) L.geometric = false;
  L.audit_holds = true;
  for (int k = 1; k <= k_max; ++k)
    if (L.Q[k] > L.audit_rhs[k - 1] * (1.0 + 1e-9) + 1e-300) L.audit_holds = false;
  return L;
}

double degiorgi_q0(const TrajectoryRecord& traj, double t0) {
  double ts = 0.0;
  const auto snaps = window_snapshots(traj, t0, ts);
  const LevelSeries ls = level_series(snaps, 0.0);
  return sup_on(ls.l2sq, ts, ts + 2.0 * t0) + 2.0 * traj.kappa * integrate_series(ls.half, ts, ts + 2.0 * t0);
}

DeGiorgiLevel degiorgi_auto_level(const TrajectoryRecord& traj, double t0) {
  double ts = 0.0;
  const auto snaps = window_snapshots(traj, t0, ts);
  if (!(traj.kappa > 0.0)) throw InputError("degiorgi: kappa must be positive");
  const double kappa = traj.kappa;
  double sup = 0.0;
  for (const SolverState* s : snaps) {
    if (s->t < ts + 0.5 * t0 - 1e-12) continue;
    for (double v : s->theta.samples()) sup = std::max(sup, v);
  }
  const double B = hs_norm(snaps.front()->theta, 0.0) + hs_norm(traj.forcing, 0.0) / std::sqrt(kappa);
  DeGiorgiLevel out;
  out.c = B > 0.0 ? kappa * sup / B : 0.0;
  out.M = std::max(2.0 * linf_norm(traj.forcing), B > 0.0 ? out.c / kappa * B : 0.0);
  if (!(out.M > 0.0)) out.M = std::numeric_limits<double>::min();
  return out;
}

CheckReport degiorgi_check(const DeGiorgiLadder& L, const std::string& name) {
  CheckReport r;
  r.name = name;
  r.fitted_name = "M";
  r.fitted = L.M;
  r.tolerance = 1e-10;
  r.t_min = 0.0;
  r.t_max = 2.0 * L.t0;
  r.values.emplace_back("Q0", L.Q.front());
  r.values.emplace_back("Qkmax", L.Q.back());
  double worst = 0.0;
  for (std::size_t k = 2; k < L.ratio.size(); ++k) worst = std::max(worst, L.ratio[k]);
  r.values.emplace_back("max_ratio_k3", worst);
  r.values.emplace_back("k_max", L.k_max);
  r.values.emplace_back("window_snapshots", static_cast<double>(L.window_snapshots));
  r.values.emplace_back("converged", L.converged ? 1.0 : 0.0);
  r.values.emplace_back("geometric", L.geometric ? 1.0 : 0.0);
  r.values.emplace_back("audit_holds", L.audit_holds ? 1.0 : 0.0);
  r.status = L.converged && L.geometric ? CheckStatus::Pass : CheckStatus::Fail;
  if (!L.audit_holds) r.note = "level-set recursion audit exceeded";
  return r;
}

}  // namespace sqg
