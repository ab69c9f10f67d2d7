#include "sqg/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sqg/error.hpp"
#include "sqg/holder.hpp"
#include "sqg/norms.hpp"

namespace sqg {

namespace {

void set_constant(FittedConstant& c, double value, double t_min, double t_max, const char* source) {
  c.value = value;
  c.t_min = t_min;
  c.t_max = t_max;
  c.fitted = true;
  c.source = source;
}

}  // namespace

CheckReport h1_envelope_check(const TrajectoryRecord& traj, ConstantsLedger& L) {
  if (traj.samples.empty()) throw InputError("h1_envelope_check: empty trajectory");
  if (!std::isfinite(L.calpha_bound) || !(L.calpha_bound > 0.0))
    throw InputError("h1_envelope_check: ledger has no C^alpha bound");
  const double kappa = L.kappa;
  const double c0 = L.c0.value;
  const double t_start = traj.samples.front().t;
  const double t_end = traj.samples.back().t;
  const double a0 = traj.samples.front().h1 * traj.samples.front().h1;

  double need = 0.0;
  for (const auto& s : traj.samples) {
    const double t = s.t - t_start;
    need = std::max(need, s.h1 * s.h1 - a0 * std::exp(-c0 * kappa * t / 4.0));
  }
  const double k1 = std::max(1.0, need);
  const double alpha = L.alpha();
  double x = k1 * c0 * kappa / 4.0 - 4.0 * L.f_h1 * L.f_h1 / (c0 * kappa);
  if (!(x > 0.0)) x = k1 * c0 * kappa / 4.0;
  set_constant(L.c_h1, kappa / L.calpha_bound * std::pow(x, 4.0 * alpha), t_start, t_end, "h1_envelope");

  const auto cum = traj.series("int_h32_sq");
  double worst = 0.0;
  bool windowed = false;
  for (const auto& [t, v] : cum) {
    if (t + 1.0 > t_end + 1e-12) break;
    worst = std::max(worst, interpolate_series(cum, t + 1.0) - v);
    windowed = true;
  }
  CheckReport r;
  r.name = "h1_envelope";
  r.fitted_name = "K1";
  r.fitted = k1;
  r.tolerance = 0.0;
  r.t_min = t_start;
  r.t_max = t_end;
  r.values.emplace_back("K1_needed", need);
  r.values.emplace_back("c_K1", L.c_h1.value);
  r.values.emplace_back("alpha", alpha);
  r.values.emplace_back("calpha_bound", L.calpha_bound);
  if (windowed) {
    const double c = kappa * worst / (a0 + k1);
    set_constant(L.c_h32, std::max(c, std::numeric_limits<double>::min()), t_start, t_end, "h32_integral");
    r.values.emplace_back("sup_h32_window_integral", worst);
    r.values.emplace_back("c_h32", L.c_h32.value);
  } else {
    r.note = "trajectory shorter than one time unit; H^{3/2} window bound not evaluated";
  }
  r.status = std::isfinite(k1) && std::isfinite(L.c_h1.value) && L.c_h1.value > 0.0 ? CheckStatus::Pass
                                                                                      : CheckStatus::Fail;
  return r;
}

double fit_r2_constant(const TrajectoryRecord& traj, ConstantsLedger& L) {
  if (traj.samples.empty()) throw InputError("fit_r2_constant: empty trajectory");
  const double t_start = traj.samples.front().t;
  double sup = 0.0;
  for (const auto& s : traj.samples)
    if (s.t - t_start >= 1.0 - 1e-12) sup = std::max(sup, s.h32 * s.h32);
  const double r1 = L.r1();
  const double base = 2.0 * r1 * r1 + L.f_h1 * L.f_h1 / L.kappa;
  double c = sup > base ? L.kappa * std::log(sup / base) / (r1 * r1) : 0.0;
  c = std::max(c, std::numeric_limits<double>::min());
  set_constant(L.c_r2, c, t_start + 1.0, traj.samples.back().t, "h32_sup");
  return c;
}

double fit_c1(const TrajectoryRecord& traj, ConstantsLedger& L, const Series* seminorms) {
  if (traj.snapshots.empty()) throw InputError("fit_c1: trajectory has no snapshots");
  const double c0 = L.c0.value;
  const double alpha = L.ball_alpha();
  const AbsorbingEntry e = absorbing_entry_time(traj.series("linf"), L.b_inf_radius());
  const double ts = traj.snapshots.front().t;
  double start = ts;
  double kinf = L.theta0_linf + L.f_linf / (c0 * L.kappa);
  if (e.entered) {
    start = e.entry_time;
    kinf = traj.samples[e.entry_index].linf + L.f_linf / (c0 * L.kappa);
  }
  const double from = start + t_alpha(alpha, 1.0);
  const Series semi = seminorms ? *seminorms : holder_series(traj, alpha);
  double sup = 0.0;
  for (std::size_t i = 0; i < semi.size(); ++i) {
    if (semi[i].first < from - 1e-12) continue;
    sup = std::max(sup, linf_norm(traj.snapshots[i].theta) + semi[i].second);
  }
  const double c = kinf > 0.0 ? sup / kinf : 0.0;
  const double c1 = std::max(4.0 * c / c0, std::numeric_limits<double>::min());
  set_constant(L.c1, c1, from, traj.snapshots.back().t, e.entered ? "calpha_after_binf_entry" : "calpha_full");
  return c1;
}

Ball parse_ball(const std::string& name) {
  if (name == "linf") return Ball::Linf;
  if (name == "calpha") return Ball::Calpha;
  if (name == "h1") return Ball::H1;
  if (name == "h32") return Ball::H32;
  throw InputError("unknown ball '" + name + "' (expected linf, calpha, h1 or h32)");
}

const char* to_string(Ball b) noexcept {
  switch (b) {
    case Ball::Linf: return "linf";
    case Ball::Calpha: return "calpha";
    case Ball::H1: return "h1";
    case Ball::H32: return "h32";
  }
  return "linf";
}

double ball_radius(const ConstantsLedger& L, Ball ball) {
  switch (ball) {
    case Ball::Linf: return L.b_inf_radius();
    case Ball::Calpha: return L.b_alpha_radius();
    case Ball::H1: return L.r1();
    case Ball::H32: return L.r2();
  }
  return L.b_inf_radius();
}

Series ball_series(const TrajectoryRecord& traj, const ConstantsLedger& L, Ball ball, const Series* seminorms) {
  if (ball == Ball::Linf) return traj.series("linf");
  if (ball == Ball::H32) return traj.series("h32");
  if (traj.snapshots.empty()) throw InputError(std::string("ball ") + to_string(ball) + " needs stored snapshots");
  const Series semi = seminorms ? *seminorms : holder_series(traj, L.ball_alpha());
  Series out;
  for (std::size_t i = 0; i < semi.size(); ++i) {
    const auto& theta = traj.snapshots[i].theta;
    const double calpha = linf_norm(theta) + semi[i].second;
    if (ball == Ball::Calpha) {
      out.emplace_back(semi[i].first, calpha);
    } else {
      const double h1 = hs_norm(theta, 1.0);
      out.emplace_back(semi[i].first, std::sqrt(h1 * h1 + calpha * calpha));
    }
  }
  return out;
}

CheckReport absorbing_check(const TrajectoryRecord& traj, const ConstantsLedger& L, Ball ball, const Series* seminorms) {
  const Series s = ball_series(traj, L, ball, seminorms);
  const double radius = ball_radius(L, ball);
  const AbsorbingEntry e = absorbing_entry_time(s, radius);
  CheckReport r;
  r.name = std::string("absorb_") + to_string(ball);
  r.fitted_name = "t_B";
  r.fitted = e.entry_time;
  r.tolerance = 0.0;
  r.t_min = s.front().first;
  r.t_max = s.back().first;
  r.values.emplace_back("radius", radius);
  r.values.emplace_back("entered", e.entered ? 1.0 : 0.0);
  r.values.emplace_back("initial", s.front().second);
  r.values.emplace_back("final", s.back().second);
  r.status = e.entered ? CheckStatus::Pass : CheckStatus::Fail;
  if (!e.entered) r.note = "not entered";
  return r;
}

}  // namespace sqg
