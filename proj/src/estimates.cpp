#include "sqg/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sqg/error.hpp"
#include "sqg/norms.hpp"

namespace sqg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_samples(const TrajectoryRecord& traj, const char* who) {
  if (traj.samples.empty()) throw InputError(std::string(who) + ": empty trajectory");
}

double elapsed(const TrajectoryRecord& traj, std::size_t i) { return traj.samples[i].t - traj.samples.front().t; }

// Largest c with g(c) = v0 e^{-c kappa t} + F / (c kappa) >= v; g decreases in c.
double largest_rate(double v0, double v, double t, double kappa, double F) {
  auto g = [&](double c) { return v0 * std::exp(-c * kappa * t) + F / (c * kappa); };
  double hi = 1.0;
  while (g(hi) >= v) {
    hi *= 2.0;
    if (hi > 1e8) return kInf;
  }
  double lo = hi / 2.0;
  while (g(lo) < v) {
    lo /= 2.0;
    if (lo < 1e-12) return lo;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) >= v ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

double fit_energy_c0(const TrajectoryRecord& traj, double kappa, const SpectralField& forcing) {
  require_samples(traj, "fit_energy_c0");
  const double f2 = hs_norm_squared(forcing, 0.0);
  if (f2 == 0.0 || !(kappa > 0.0)) return kInf;
  const double e0 = traj.samples.front().l2 * traj.samples.front().l2;
  double c0 = kInf;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    const double lhs = s.l2 * s.l2 + kappa * s.int_half_sq;
    if (lhs > e0) c0 = std::min(c0, f2 * elapsed(traj, i) / (kappa * (lhs - e0)));
  }
  return c0;
}

double fit_decay_c0(const Series& series, double kappa, double forcing_norm) {
  if (series.empty()) throw InputError("fit_decay_c0: empty series");
  if (!(kappa > 0.0)) return kInf;
  const double t0 = series.front().first;
  const double v0 = series.front().second;
  double c0 = kInf;
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double t = series[i].first - t0;
    const double v = series[i].second;
    if (v <= 0.0) continue;
    c0 = std::min(c0, largest_rate(v0, v, t, kappa, forcing_norm));
  }
  return c0;
}

ConstantsLedger ledger_from_decay(const TrajectoryRecord& traj) {
  require_samples(traj, "ledger_from_decay");
  ConstantsLedger L;
  L.kappa = traj.kappa > 0.0 ? traj.kappa : 1.0;
  L.f_l2 = hs_norm(traj.forcing, 0.0);
  L.f_linf = linf_norm(traj.forcing);
  L.f_h1 = hs_norm(traj.forcing, 1.0);
  L.theta0_l2 = traj.samples.front().l2;
  L.theta0_linf = traj.samples.front().linf;

  const double e = fit_energy_c0(traj, L.kappa, traj.forcing);
  const double l2 = fit_decay_c0(traj.series("l2"), L.kappa, L.f_l2);
  const double li = fit_decay_c0(traj.series("linf"), L.kappa, L.f_linf);
  double c0 = std::min({e, l2, li});
  L.c0.fitted = std::isfinite(c0);
  if (!std::isfinite(c0)) c0 = default_decay_constant();
  L.c0.value = c0;
  L.c0.t_min = traj.samples.front().t;
  L.c0.t_max = traj.samples.back().t;
  L.c0.source = c0 == e ? "energy_inequality" : c0 == l2 ? "decay_l2" : c0 == li ? "decay_linf" : "default";
  return L;
}

CheckReport energy_inequality_check(const TrajectoryRecord& traj, double kappa, const SpectralField& forcing,
                                    double c0, double tolerance) {
  require_samples(traj, "energy_inequality_check");
  if (!(c0 > 0.0)) throw InputError("energy_inequality_check: c0 must be positive");
  CheckReport r;
  r.name = "energy_inequality";
  r.fitted_name = "c0";
  r.fitted = c0;
  r.tolerance = tolerance;
  r.t_min = traj.samples.front().t;
  r.t_max = traj.samples.back().t;

  const double f2 = hs_norm_squared(forcing, 0.0);
  const double e0 = traj.samples.front().l2 * traj.samples.front().l2;
  double worst = -kInf;
  double balance = 0.0;
  double scale = e0;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    const double t = elapsed(traj, i);
    const double lhs = s.l2 * s.l2 + kappa * s.int_half_sq;
    const double rhs = e0 + (kappa > 0.0 ? f2 * t / (c0 * kappa) : 0.0);
    const double excess = lhs - rhs;
    const double rel = rhs > 0.0 ? excess / rhs : (excess > 0.0 ? kInf : 0.0);
    worst = std::max(worst, rel);
    const double bal = s.l2 * s.l2 + 2.0 * kappa * s.int_half_sq - 2.0 * s.int_work - e0;
    balance = std::max(balance, std::abs(bal));
    scale = std::max(scale, s.l2 * s.l2 + 2.0 * kappa * s.int_half_sq);
  }
  r.values.emplace_back("max_rel_excess", worst);
  r.values.emplace_back("balance_residual", balance);
  r.values.emplace_back("balance_rel", scale > 0.0 ? balance / scale : 0.0);
  r.status = worst <= tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

CheckReport linf_estimate_check(const TrajectoryRecord& traj, const ConstantsLedger& L) {
  require_samples(traj, "linf_estimate_check");
  const double t0 = traj.samples.front().t;
  if (traj.samples.back().t - t0 < 1.0) throw InputError("linf_estimate_check: trajectory must reach t = 1");
  CheckReport r;
  r.name = "linf_estimate";
  r.fitted_name = "c";
  r.t_min = t0 + 1.0;
  r.t_max = traj.samples.back().t;
  r.tolerance = 0.0;
  const double c0 = L.c0.value;
  const double kappa = L.kappa;
  const double B = L.theta0_l2 + L.f_l2 / std::sqrt(kappa);
  const double asym = L.f_linf / (c0 * kappa);
  double c = 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const double t = elapsed(traj, i);
    if (t < 1.0 - 1e-12) continue;
    const double v = traj.samples[i].linf;
    peak = std::max(peak, v);
    // round-off sized excess says nothing about the prefactor
    const double excess = v - asym;
    if (excess <= 1e-12 * std::max(v, asym) || B == 0.0) continue;
    c = std::max(c, excess * kappa / B * std::exp(c0 * kappa * t));
  }
  r.fitted = c;
  r.values.emplace_back("c0", c0);
  r.values.emplace_back("asymptote", asym);
  r.values.emplace_back("sup_linf", peak);
  r.status = std::isfinite(c) ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

CheckReport decay_envelope_check(const TrajectoryRecord& traj, const ConstantsLedger& L, const std::string& norm) {
  require_samples(traj, "decay_envelope_check");
  double fnorm = 0.0;
  if (norm == "l2") fnorm = L.f_l2;
  else if (norm == "linf") fnorm = L.f_linf;
  else throw InputError("decay_envelope_check: norm must be l2 or linf");
  const double asym = fnorm / (L.c0.value * L.kappa);
  const auto s = traj.series(norm);
  const EnvelopeFit fit = fit_decay_envelope(s, asym);
  CheckReport r;
  r.name = "decay_" + norm;
  r.fitted_name = "rate";
  r.fitted = fit.rate;
  r.tolerance = 1e-9;
  r.t_min = s.front().first;
  r.t_max = s.back().first;
  r.values.emplace_back("prefactor", fit.prefactor);
  r.values.emplace_back("asymptote", asym);
  r.values.emplace_back("max_violation", fit.max_violation);
  r.values.emplace_back("rate_over_kappa", fit.rate / L.kappa);
  r.values.emplace_back("tail_excess", s.back().second - asym);
  const bool finite = fit.below_asymptote || (std::isfinite(fit.rate) && std::isfinite(fit.prefactor));
  r.status = finite && fit.max_violation <= 1e-9 ? CheckStatus::Pass : CheckStatus::Fail;
  if (fit.below_asymptote) r.note = "series below asymptote";
  return r;
}

}  // namespace sqg
