#include "sqg/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <optional>
#include <thread>

#include "sqg/dissipation.hpp"
#include "sqg/error.hpp"
#include "sqg/norms.hpp"

namespace sqg {

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "absorb_calpha", "absorb_h1",     "absorb_h32",  "absorb_linf",        "conservation",
      "decay_l2",      "decay_linf",    "degiorgi",    "dissipation_identity", "energy_inequality",
      "h1_envelope",   "holder_bound",  "holder_propagation", "linf_estimate", "lower_bound",
      "psi"};
  return names;
}

bool CheckRun::passed() const {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed(); });
}

namespace {

bool wants(const std::vector<std::string>& checks, const char* name) {
  return std::find(checks.begin(), checks.end(), name) != checks.end();
}

bool wants_any(const std::vector<std::string>& checks, std::initializer_list<const char*> names) {
  for (const char* n : names)
    if (wants(checks, n)) return true;
  return false;
}

CheckReport error_report(const std::string& name, const std::exception& e) {
  CheckReport r;
  r.name = name;
  r.status = CheckStatus::Fail;
  r.note = e.what();
  return r;
}

CheckReport conservation_check(const TrajectoryRecord& traj, double tolerance) {
  CheckReport r;
  r.name = "conservation";
  r.fitted_name = "l2_drift";
  r.tolerance = tolerance;
  r.t_min = traj.samples.front().t;
  r.t_max = traj.samples.back().t;
  const double l20 = traj.samples.front().l2;
  const double li0 = traj.samples.front().linf;
  double drift = 0.0, linf_drift = 0.0;
  for (const auto& s : traj.samples) {
    drift = std::max(drift, l20 > 0.0 ? std::abs(s.l2 - l20) / l20 : std::abs(s.l2));
    linf_drift = std::max(linf_drift, li0 > 0.0 ? std::abs(s.linf - li0) / li0 : std::abs(s.linf));
  }
  r.fitted = drift;
  r.values.emplace_back("linf_drift", linf_drift);
  r.status = drift <= tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  r.note = "linf drift is a grid quantity and is reported only";
  return r;
}

const SpectralField& last_field(const TrajectoryRecord& traj, const char* who) {
  if (traj.snapshots.empty()) throw InputError(std::string(who) + ": trajectory has no snapshots");
  return traj.snapshots.back().theta;
}

CheckReport dissipation_report(const TrajectoryRecord& traj) {
  const SpectralField& f = last_field(traj, "dissipation_identity");
  const DissipationCheck d = dissipation_integral_check(f);
  CheckReport r;
  r.name = "dissipation_identity";
  r.fitted_name = "rel_err";
  r.fitted = d.rel_err;
  r.tolerance = 0.01;
  r.t_min = r.t_max = traj.snapshots.back().t;
  r.values.emplace_back("quadrature", d.quadrature);
  r.values.emplace_back("spectral", d.spectral);
  r.status = d.rel_err < 0.01 ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

CheckReport lower_bound_report(const TrajectoryRecord& traj, ConstantsLedger& L, double alpha) {
  const SpectralField& f = last_field(traj, "lower_bound");
  CheckReport r;
  r.name = "lower_bound";
  r.fitted_name = "c2";
  r.tolerance = 0.0;
  r.t_min = r.t_max = traj.snapshots.back().t;
  if (f.is_zero()) {
    r.fitted = 0.0;
    r.status = CheckStatus::Pass;
    r.note = "zero field";
    return r;
  }
  const LowerBoundSample s = sample_lower_bound(f, alpha, 0.0, 128, 0x5eed);
  r.fitted = s.c2_max;
  L.c2 = {s.c2_max, r.t_min, r.t_max, true, "lower_bound"};
  r.values.emplace_back("evaluated", static_cast<double>(s.evaluated));
  r.values.emplace_back("c2_median", s.c2_median);
  if (std::isfinite(L.calpha_bound) && L.calpha_bound > 0.0) {
    const double c4 = fit_gradient_lower_bound(f, alpha, L.calpha_bound);
    L.c4 = {c4, r.t_min, r.t_max, true, "lower_bound"};
    r.values.emplace_back("c4", c4);
  }
  r.status = s.evaluated >= 100 && std::isfinite(s.c2_max) ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

void run_parallel(std::vector<std::function<void()>>& tasks, int threads) {
  if (threads <= 1 || tasks.size() <= 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min<int>(threads, static_cast<int>(tasks.size()));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < tasks.size(); i = next++) tasks[i]();
    });
  for (auto& th : pool) th.join();
}

}  // namespace

CheckRun run_checks(const TrajectoryRecord& traj, const std::vector<std::string>& checks,
                    const CheckOptions& options) {
  for (const auto& c : checks)
    if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
      throw InputError("unknown check '" + c + "'");
  if (traj.samples.empty()) throw InputError("run_checks: empty trajectory");
  if (!(traj.kappa > 0.0))
    for (const auto& c : checks)
      if (c != "conservation" && c != "dissipation_identity")
        throw InputError("check '" + c + "' requires kappa > 0");

  CheckRun run;
  ConstantsLedger& L = run.ledger;
  L = ledger_from_decay(traj);
  L.c3 = options.c3;
  L.validate();

  const bool need_holder = wants_any(checks, {"holder_bound", "holder_propagation", "psi", "h1_envelope",
                                              "absorb_calpha", "absorb_h1", "absorb_h32", "lower_bound"});
  double alpha = 0.25;
  if (traj.kappa > 0.0) alpha = options.alpha > 0.0 ? options.alpha : L.alpha();

  // independent checks
  std::vector<std::optional<CheckReport>> slots;
  std::vector<std::function<void()>> tasks;
  auto add = [&](const char* name, std::function<CheckReport()> fn) {
    if (!wants(checks, name)) return;
    const std::size_t i = slots.size();
    slots.emplace_back();
    tasks.push_back([&slots, i, name, fn] {
      try {
        slots[i] = fn();
      } catch (const std::exception& e) {
        slots[i] = error_report(name, e);
      }
    });
  };
  add("conservation", [&] { return conservation_check(traj, options.conservation_tolerance); });
  add("energy_inequality",
      [&] { return energy_inequality_check(traj, traj.kappa, traj.forcing, L.c0.value, options.energy_tolerance); });
  add("decay_l2", [&] { return decay_envelope_check(traj, L, "l2"); });
  add("decay_linf", [&] { return decay_envelope_check(traj, L, "linf"); });
  add("linf_estimate", [&] { return linf_estimate_check(traj, L); });
  add("dissipation_identity", [&] { return dissipation_report(traj); });
  add("degiorgi", [&] {
    const double M = options.degiorgi_M > 0.0 ? options.degiorgi_M
                                               : degiorgi_auto_level(traj, options.degiorgi_t0).M;
    return degiorgi_check(degiorgi_ladder(traj, M, options.degiorgi_t0, options.degiorgi_k_max));
  });
  Series semi;
  if (need_holder && !traj.snapshots.empty()) {
    tasks.push_back([&] { semi = holder_series(traj, alpha, 0.25, 4096, std::max(1, options.threads / 2)); });
  }
  run_parallel(tasks, options.threads);
  for (auto& s : slots) run.reports.push_back(std::move(*s));
  for (const auto& r : run.reports)
    if (r.name == "linf_estimate" && r.status == CheckStatus::Pass)
      L.c_linf = {std::max(r.fitted, std::numeric_limits<double>::min()), r.t_min, r.t_max, true, r.name};

  // checks that feed each other through the ledger
  auto guarded = [&](const char* name, const std::function<CheckReport()>& fn) {
    try {
      run.reports.push_back(fn());
    } catch (const std::exception& e) {
      run.reports.push_back(error_report(name, e));
    }
  };
  if (need_holder && !semi.empty()) {
    double sup = 0.0;
    for (std::size_t i = 0; i < semi.size(); ++i)
      sup = std::max(sup, linf_norm(traj.snapshots[i].theta) + semi[i].second);
    L.calpha_bound = sup;
    try {
      CheckReport hb = holder_bound_check(traj, L, alpha, &semi);
      if (hb.status == CheckStatus::Pass)
        L.c_holder = {std::max(hb.fitted, std::numeric_limits<double>::min()), hb.t_min, hb.t_max, true, hb.name};
      if (wants(checks, "holder_bound")) run.reports.push_back(std::move(hb));
    } catch (const std::exception& e) {
      if (wants(checks, "holder_bound")) run.reports.push_back(error_report("holder_bound", e));
    }
  }
  if (wants(checks, "holder_propagation"))
    guarded("holder_propagation", [&] { return holder_propagation_check(traj, L, alpha, semi.empty() ? nullptr : &semi); });
  if (wants(checks, "psi")) guarded("psi", [&] { return psi_check(traj, L, alpha, options.xi0, options.threads); });
  if (wants_any(checks, {"h1_envelope", "absorb_h1", "absorb_h32"})) {
    try {
      CheckReport h = h1_envelope_check(traj, L);
      if (wants(checks, "h1_envelope")) run.reports.push_back(std::move(h));
    } catch (const std::exception& e) {
      if (wants(checks, "h1_envelope")) run.reports.push_back(error_report("h1_envelope", e));
    }
  }
  if (wants(checks, "lower_bound")) guarded("lower_bound", [&] { return lower_bound_report(traj, L, alpha); });
  Series ball_semi;
  if (wants_any(checks, {"absorb_calpha", "absorb_h1", "absorb_h32"}) && !traj.snapshots.empty()) {
    try {
      const double ba = L.ball_alpha();
      ball_semi = (!semi.empty() && alpha == ba) ? semi : holder_series(traj, ba, 0.25, 4096, options.threads);
      fit_c1(traj, L, &ball_semi);
    } catch (const std::exception&) {
    }
  }
  if (wants(checks, "absorb_linf")) guarded("absorb_linf", [&] { return absorbing_check(traj, L, Ball::Linf); });
  if (wants(checks, "absorb_calpha"))
    guarded("absorb_calpha", [&] { return absorbing_check(traj, L, Ball::Calpha, ball_semi.empty() ? nullptr : &ball_semi); });
  if (wants(checks, "absorb_h1")) guarded("absorb_h1", [&] { return absorbing_check(traj, L, Ball::H1, ball_semi.empty() ? nullptr : &ball_semi); });
  if (wants(checks, "absorb_h32"))
    guarded("absorb_h32", [&] {
      fit_r2_constant(traj, L);
      return absorbing_check(traj, L, Ball::H32);
    });
  sort_reports(run.reports);
  return run;
}

}  // namespace sqg
