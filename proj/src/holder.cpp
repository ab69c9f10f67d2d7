#include "sqg/holder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <atomic>

#include "sqg/dissipation.hpp"
#include "sqg/error.hpp"
#include "sqg/operators.hpp"

namespace sqg {

namespace {

double exponent(double alpha) { return 2.0 * (1.0 - alpha) / 3.0; }

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 0.25)) throw InputError("alpha must lie in (0, 1/4]");
}

std::string shift_policy(const TorusGrid& g, double radius, std::size_t max_shifts) {
  const auto shifts = default_shift_set(g.n(), radius, max_shifts);
  return "shift set: half-plane grid offsets 0<|h|<=" + format_double(radius) + ", " +
         std::to_string(shifts.size()) + " shifts at n=" + std::to_string(g.n());
}

template <class Fn>
void for_each_index(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), count));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

double alpha_choice(double k_inf, double kappa, double c3) {
  if (!(k_inf > 0.0)) throw InputError("alpha_choice: K_inf must be positive");
  if (!(kappa > 0.0)) throw InputError("alpha_choice: kappa must be positive");
  if (!(c3 >= 64.0)) throw InputError("alpha_choice: c3 must be >= 64");
  return std::min(kappa / (c3 * k_inf), 0.25);
}

double t_alpha(double alpha, double xi0) {
  check_alpha(alpha);
  if (!(xi0 >= 0.0)) throw InputError("t_alpha: xi0 must be >= 0");
  if (xi0 == 0.0) return 0.0;
  const double p = exponent(alpha);
  return std::pow(xi0, p) / p;
}

double xi_profile(double t, double alpha, double xi0) {
  check_alpha(alpha);
  if (!(xi0 >= 0.0)) throw InputError("xi_profile: xi0 must be >= 0");
  if (t <= 0.0) return xi0;
  const double p = exponent(alpha);
  const double base = std::pow(xi0, p) - p * t;
  if (base <= 0.0) return 0.0;
  return std::pow(base, 1.0 / p);
}

double xi_ode_residual(double alpha, double xi0, int points) {
  check_alpha(alpha);
  if (points < 1) throw InputError("xi_ode_residual: need at least one point");
  const double ta = t_alpha(alpha, xi0);
  if (ta == 0.0) return 0.0;
  const double q = (1.0 + 2.0 * alpha) / 3.0;
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = ta * (i + 0.5) / points;
    const double d = 1e-5 * std::min(t, ta - t);
    const double deriv = (xi_profile(t + d, alpha, xi0) - xi_profile(t - d, alpha, xi0)) / (2.0 * d);
    const double rhs = -std::pow(xi_profile(t, alpha, xi0), q);
    worst = std::max(worst, std::abs(deriv - rhs) / std::abs(rhs));
  }
  return worst;
}

Series psi_series(const TrajectoryRecord& traj, double alpha, double xi0, double radius, std::size_t max_shifts,
                  int threads) {
  check_alpha(alpha);
  Series out(traj.snapshots.size());
  if (traj.snapshots.empty()) return out;
  const double ts = traj.snapshots.front().t;
  const auto shifts = default_shift_set(traj.grid().n(), radius, max_shifts);
  for_each_index(out.size(), threads, [&](std::size_t i) {
    const auto& s = traj.snapshots[i];
    const HolderProbeConfig probe{alpha, xi_profile(s.t - ts, alpha, xi0), traj.grid().n(), 1, shifts};
    const double v = holder_seminorm(s.theta, probe);
    out[i] = {s.t, v * v};
  });
  return out;
}

Series holder_series(const TrajectoryRecord& traj, double alpha, double radius, std::size_t max_shifts,
                     int threads) {
  check_alpha(alpha);
  Series out(traj.snapshots.size());
  if (traj.snapshots.empty()) return out;
  const auto shifts = default_shift_set(traj.grid().n(), radius, max_shifts);
  const HolderProbeConfig probe{alpha, 0.0, traj.grid().n(), 1, shifts};
  for_each_index(out.size(), threads, [&](std::size_t i) {
    const auto& s = traj.snapshots[i];
    out[i] = {s.t, holder_seminorm(s.theta, probe)};
  });
  return out;
}

CheckReport holder_bound_check(const TrajectoryRecord& traj, const ConstantsLedger& L, double alpha,
                               const Series* seminorms) {
  CheckReport r;
  r.name = "holder_bound";
  r.fitted_name = "c";
  r.tolerance = 0.0;
  const double ta = t_alpha(alpha, 1.0);
  r.note = shift_policy(traj.grid(), 0.25, 4096);
  if (traj.snapshots.empty()) throw InputError("holder_bound_check: trajectory has no snapshots");
  const double ts = traj.snapshots.front().t;
  r.t_min = ts + ta;
  r.t_max = traj.snapshots.back().t;
  const double kinf = L.k_inf();
  const Series series = seminorms ? *seminorms : holder_series(traj, alpha);
  double sup = 0.0;
  std::size_t used = 0;
  for (const auto& [t, v] : series) {
    if (t - ts < ta - 1e-12) continue;
    sup = std::max(sup, v);
    ++used;
  }
  r.fitted = kinf > 0.0 ? sup / kinf : 0.0;
  r.values.emplace_back("alpha", alpha);
  r.values.emplace_back("t_alpha", ta);
  r.values.emplace_back("K_inf", kinf);
  r.values.emplace_back("sup_seminorm", sup);
  r.values.emplace_back("snapshots", static_cast<double>(used));
  r.status = used > 0 && std::isfinite(sup) ? CheckStatus::Pass : CheckStatus::Fail;
  if (used == 0) r.note += "; trajectory ends before t_alpha";
  return r;
}

CheckReport holder_propagation_check(const TrajectoryRecord& traj, const ConstantsLedger& L, double alpha,
                                     const Series* seminorms) {
  if (traj.snapshots.empty()) throw InputError("holder_propagation_check: trajectory has no snapshots");
  CheckReport r;
  r.name = "holder_propagation";
  r.fitted_name = "c";
  r.tolerance = 0.0;
  r.note = shift_policy(traj.grid(), 0.25, 4096);
  r.t_min = traj.snapshots.front().t;
  r.t_max = traj.snapshots.back().t;
  const double kinf = L.k_inf();
  const Series series = seminorms ? *seminorms : holder_series(traj, alpha);
  const double semi0 = series.front().second;
  double c = 0.0;
  double sup_norm = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double norm = linf_norm(traj.snapshots[i].theta) + series[i].second;
    sup_norm = std::max(sup_norm, norm);
    if (kinf > 0.0) c = std::max(c, (norm - semi0) / kinf);
  }
  r.fitted = c;
  r.values.emplace_back("alpha", alpha);
  r.values.emplace_back("seminorm0", semi0);
  r.values.emplace_back("sup_calpha_norm", sup_norm);
  r.values.emplace_back("K_inf", kinf);
  r.status = std::isfinite(c) ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

CheckReport psi_check(const TrajectoryRecord& traj, const ConstantsLedger& L, double alpha, double xi0,
                      int threads) {
  if (traj.snapshots.empty()) throw InputError("psi_check: trajectory has no snapshots");
  CheckReport r;
  r.name = "psi";
  r.fitted_name = "c";
  r.tolerance = 0.0;
  r.note = shift_policy(traj.grid(), 0.25, 4096);
  const auto psi = psi_series(traj, alpha, xi0, 0.25, 4096, threads);
  const double ts = traj.snapshots.front().t;
  const double ta = t_alpha(alpha, xi0);
  r.t_min = ts;
  r.t_max = traj.snapshots.back().t;
  const double linf0 = linf_norm(traj.snapshots.front().theta);
  const double bound0 = xi0 > 0.0 ? 4.0 * linf0 * linf0 / std::pow(xi0, 2.0 * alpha)
                                  : std::numeric_limits<double>::infinity();
  const double kinf = L.k_inf();
  double sup = 0.0;
  for (const auto& [t, v] : psi)
    if (t - ts >= ta - 1e-12) sup = std::max(sup, v);
  r.fitted = kinf > 0.0 ? sup / (kinf * kinf) : 0.0;
  r.values.emplace_back("psi0", psi.front().second);
  r.values.emplace_back("psi0_bound", bound0);
  r.values.emplace_back("t_alpha", ta);
  r.values.emplace_back("sup_psi_after_t_alpha", sup);
  r.status = psi.front().second <= bound0 * (1.0 + 1e-12) ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

LowerBoundProbe nonlinear_lower_bound_probe(const SpectralField& theta, GridPoint x, Shift h, double alpha,
                                            double xi) {
  check_alpha(alpha);
  if (!(xi >= 0.0)) throw InputError("nonlinear_lower_bound_probe: xi must be >= 0");
  const int n = theta.grid().n();
  if (x.j1 < 0 || x.j1 >= n || x.j2 < 0 || x.j2 >= n) throw InputError("nonlinear_lower_bound_probe: x off grid");
  const SpectralField delta = finite_difference(theta, h);
  const auto ds = delta.samples();
  const double dx = ds[static_cast<std::size_t>(x.j1) * n + x.j2];
  const double linf = linf_norm(theta);
  if (!(std::abs(dx) > 1e-14 * linf)) throw InputError("nonlinear_lower_bound_probe: delta_h theta(x) vanishes");
  const double len = shift_length(h, n);
  const double w = xi * xi + len * len;
  LowerBoundProbe out;
  out.lhs = dissipation_density(delta, x) / std::pow(w, alpha);
  const double v = std::abs(dx) / std::pow(w, 0.5 * alpha);
  out.rhs = v * v * v / (linf * std::pow(w, 0.5 * (1.0 - alpha)));
  out.c2_est = out.lhs > 0.0 ? out.rhs / out.lhs : std::numeric_limits<double>::infinity();
  return out;
}

LowerBoundSample sample_lower_bound(const SpectralField& theta, double alpha, double xi, std::size_t count,
                                    std::uint64_t seed) {
  const int n = theta.grid().n();
  const auto shifts = default_shift_set(n, 0.25, 4096);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_x(0, n - 1);
  std::uniform_int_distribution<std::size_t> pick_h(0, shifts.size() - 1);
  LowerBoundSample out;
  std::vector<double> est;
  const std::size_t budget = count * 4 + 16;
  for (std::size_t tries = 0; est.size() < count && tries < budget; ++tries) {
    const GridPoint x{pick_x(rng), pick_x(rng)};
    const Shift h = shifts[pick_h(rng)];
    try {
      est.push_back(nonlinear_lower_bound_probe(theta, x, h, alpha, xi).c2_est);
    } catch (const InputError&) {
      ++out.skipped;
    }
  }
  out.evaluated = est.size();
  if (!est.empty()) {
    out.c2_max = *std::max_element(est.begin(), est.end());
    std::sort(est.begin(), est.end());
    out.c2_median = est[est.size() / 2];
  }
  return out;
}

double fit_gradient_lower_bound(const SpectralField& theta, double alpha, double M) {
  check_alpha(alpha);
  if (!(M > 0.0)) throw InputError("fit_gradient_lower_bound: M must be positive");
  const auto D = gradient_dissipation_map(theta);
  const auto [g1, g2] = gradient(theta);
  const auto s1 = g1.samples();
  const auto s2 = g2.samples();
  const double p = (3.0 - alpha) / (1.0 - alpha);
  const double mscale = std::pow(M, 1.0 / (1.0 - alpha));
  double c4 = 0.0;
  for (std::size_t i = 0; i < D.size(); ++i) {
    const double g = std::hypot(s1[i], s2[i]);
    if (g == 0.0) continue;
    const double need = std::pow(g, p) / mscale;
    c4 = std::max(c4, D[i] > 0.0 ? need / D[i] : std::numeric_limits<double>::infinity());
  }
  return c4;
}

}  // namespace sqg
