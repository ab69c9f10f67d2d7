// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: sqg_acceptance <scenario dir> [criterion ...]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sqg/dissipation.hpp"
#include "sqg/experiment.hpp"
#include "sqg/norms.hpp"
#include "sqg/scenario.hpp"

using namespace sqg;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;
fs::path g_scenarios;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ScenarioSpec scenario(const std::string& name) { return load_scenario(g_scenarios / (name + ".cfg")); }

TrajectoryRecord run(const ScenarioSpec& s) {
  EvolveOptions opt;
  opt.sample_interval = s.sample_interval;
  opt.keep_snapshots = s.save_snapshots;
  opt.snapshot_stride = s.snapshot_stride;
  opt.dense_until = s.dense_until;
  return evolve(s.solver_config(), s.initial_field(), s.T, opt);
}

// Scenario (c) at both resolutions, shared by several criteria.
const TrajectoryRecord& forced(int n) {
  static std::map<int, TrajectoryRecord> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    auto s = scenario("c_forced_absorption");
    s.n = n;
    it = cache.emplace(n, run(s)).first;
  }
  return it->second;
}

const CheckRun& forced_checks(int n) {
  static std::map<int, CheckRun> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache
             .emplace(n, run_checks(forced(n), {"energy_inequality", "decay_l2", "decay_linf", "holder_bound",
                                                "absorb_linf"}))
             .first;
  }
  return it->second;
}

const CheckReport& report(const CheckRun& r, const std::string& name) {
  for (const auto& rep : r.reports)
    if (rep.name == name) return rep;
  throw std::runtime_error("missing report " + name);
}

double rel_change(double a, double b) { return std::abs(b - a) / std::abs(a); }

Outcome single_mode() {
  Clock clock;
  auto s = scenario("a_single_mode");
  auto rec = evolve(s.solver_config(), s.initial_field(), s.T, EvolveOptions{s.sample_interval});
  SolverState end{s.initial_field(), 0.0, 0};
  evolve_from(s.solver_config(), end, s.T, EvolveOptions{s.T});
  double elapsed = clock.seconds();
  // The cos(2 pi x1) amplitude is twice the (1,0) coefficient.
  double amp = 2.0 * end.theta.mode(1, 0).real();
  double exact = std::exp(-2.0 * pi);
  double err = std::abs(amp - exact) / exact;
  return {err <= 1e-6 && elapsed < 5.0 && rec.samples.size() == 101,
          fmt("amplitude=%.15g exact=%.15g rel_err=%.3g runtime=%.2fs", amp, exact, err, elapsed)};
}

Outcome energy() {
  const auto& r64 = report(forced_checks(64), "energy_inequality");
  const auto& r128 = report(forced_checks(128), "energy_inequality");
  double c64 = r64.fitted, c128 = r128.fitted;
  double excess = std::max(r64.value("max_rel_excess"), r128.value("max_rel_excess"));
  double change = rel_change(c64, c128);
  return {excess <= 1e-3 && change < 0.2 && r64.passed() && r128.passed(),
          fmt("c0(64)=%.6g c0(128)=%.6g change=%.3g max_rel_excess=%.3g balance_rel=%.3g", c64, c128, change,
              excess, r64.value("balance_rel"))};
}

double l2_drift(const TrajectoryRecord& rec) {
  double l0 = rec.samples.front().l2, worst = 0.0;
  for (const auto& s : rec.samples) worst = std::max(worst, std::abs(s.l2 - l0) / l0);
  return worst;
}

Outcome conservation() {
  auto s = scenario("b_inviscid");
  s.save_snapshots = false;
  double d1 = l2_drift(run(s));
  s.dt.dt *= 0.5;
  double d2 = l2_drift(run(s));
  double gain = d1 / d2;
  return {d1 <= 1e-6 && gain >= 4.0, fmt("drift(dt)=%.3g drift(dt/2)=%.3g reduction=%.3g", d1, d2, gain)};
}

Outcome envelopes() {
  auto s = scenario("a_single_mode");
  auto rec = run(s);
  auto fit = fit_decay_envelope(rec.series("l2"), 0.0);
  double want = 2.0 * pi * s.kappa;
  double err = std::abs(fit.rate - want) / want;
  bool ok = err < 0.01;
  std::string detail = fmt("single_mode_rate=%.10g rel_err=%.3g", fit.rate, err);
  for (const char* norm : {"decay_l2", "decay_linf"}) {
    const auto& r = report(forced_checks(64), norm);
    double rate = r.fitted, A = r.value("prefactor"), tail = r.value("tail_excess");
    ok = ok && std::isfinite(rate) && rate > 0.0 && std::isfinite(A) && tail <= 1e-9;
    detail += fmt(" %s: rate=%.4g A=%.4g tail_excess=%.3g", norm, rate, A, tail);
  }
  return {ok, detail};
}

Outcome degiorgi() {
  Clock clock;
  auto s = scenario("d_degiorgi");
  auto rec = run(s);
  auto level = degiorgi_auto_level(rec, s.check_options.degiorgi_t0);
  auto good = degiorgi_ladder(rec, level.M, s.check_options.degiorgi_t0, 10);
  double q0 = good.Q[0];
  auto bad = degiorgi_ladder(rec, std::sqrt(q0) / 100.0, s.check_options.degiorgi_t0, 10);
  double elapsed = clock.seconds();
  double worst = 0.0;
  for (int k = 3; k <= 10; ++k) worst = std::max(worst, good.ratio[k]);
  bool ok = worst <= 0.5 && good.Q[10] < 1e-10 * q0 && !bad.converged && elapsed < 120.0;
  return {ok, fmt("M=%.4g Q0=%.4g Q1=%.3g Q10=%.3g max_ratio_k>=3=%.3g small_M_Q10/Q0=%.3g small_M_converged=%d "
                  "runtime=%.1fs",
                  level.M, q0, good.Q[1], good.Q[10], worst, bad.Q[10] / q0, int(bad.converged), elapsed)};
}

Outcome holder() {
  double t_exact = t_alpha(0.25, 1.0);
  const auto& L = forced_checks(64).ledger;
  double alpha = L.alpha();
  double residual = xi_ode_residual(alpha, 1.0);
  const auto& h64 = report(forced_checks(64), "holder_bound");
  const auto& h128 = report(forced_checks(128), "holder_bound");
  double c64 = h64.fitted, c128 = h128.fitted;
  double change = rel_change(c64, c128);
  bool ok = t_exact == 2.0 && residual <= 1e-8 && std::isfinite(h64.value("sup_seminorm")) &&
            std::isfinite(h128.value("sup_seminorm")) && change < 0.3;
  return {ok, fmt("t_alpha(1/4,1)=%.17g alpha=%.6g ode_residual=%.3g c(64)=%.6g c(128)=%.6g change=%.3g", t_exact,
                  alpha, residual, c64, c128, change)};
}

Outcome dissipation() {
  auto s = scenario("c_forced_absorption");
  auto theta = s.initial_field();
  auto r64 = dissipation_integral_check(theta);
  auto r128 = dissipation_integral_check(regrid(theta, TorusGrid(128)));
  auto smooth = random_band_limited(TorusGrid(64), 3, 4.0, 2.0);
  auto s64 = dissipation_integral_check(smooth);
  auto s128 = dissipation_integral_check(regrid(smooth, TorusGrid(128)));
  bool ok = r64.rel_err < 0.01 && r128.rel_err < r64.rel_err && s64.rel_err < 0.01 && s128.rel_err < s64.rel_err;
  return {ok, fmt("kmax6: rel_err(64)=%.3g rel_err(128)=%.3g  kmax4: rel_err(64)=%.3g rel_err(128)=%.3g",
                  r64.rel_err, r128.rel_err, s64.rel_err, s128.rel_err)};
}

Outcome absorbing() {
  const auto& run64 = forced_checks(64);
  const auto& full = report(run64, "absorb_linf");
  double radius = run64.ledger.b_inf_radius();
  double factor = run64.ledger.theta0_linf / radius;

  auto s = scenario("c_forced_absorption");
  s.initial.amplitude *= 0.5;
  s.T = 3.0;
  s.save_snapshots = false;
  auto half = run(s);
  auto entry = absorbing_entry_time(half.series("linf"), radius);
  bool ok = full.passed() && full.value("entered") == 1.0 && std::isfinite(full.fitted) && entry.entered &&
            entry.entry_time < full.fitted && factor >= 49.0;
  return {ok, fmt("radius=%.6g theta0/radius=%.4g t_B(full)=%.4g t_B(half)=%.4g final=%.6g", radius, factor,
                  full.fitted, entry.entry_time, full.value("final"))};
}

Outcome semigroup() {
  auto s = scenario("c_forced_absorption");
  auto config = s.solver_config();
  config.dt.dt = 1.0 / 1024;
  EvolveOptions opt{1.0 / 64};
  SolverState whole{s.initial_field(), 0.0, 0};
  evolve_from(config, whole, 0.5, opt);
  SolverState split{s.initial_field(), 0.0, 0};
  evolve_from(config, split, 0.25, opt);
  evolve_from(config, split, 0.25, opt);
  bool same = whole.theta == split.theta && whole.t == split.t;

  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream o;
    o << in.rdbuf();
    return o.str();
  };
  auto spec = scenario("a_single_mode");
  auto root = fs::temp_directory_path() / "sqg_acceptance_repro";
  fs::remove_all(root);
  auto a = run_experiment(spec, RunOptions{root / "a", 1});
  auto b = run_experiment(spec, RunOptions{root / "b", 1});
  bool repro = true;
  for (const char* f : {"trajectory.csv", "final.ckpt", "reports.txt"})
    repro = repro && read(a.directory / f) == read(b.directory / f) && !read(a.directory / f).empty();
  fs::remove_all(root);
  return {same && repro, fmt("semigroup_bitwise=%d rerun_bitwise=%d", int(same), int(repro))};
}

Outcome continuity() {
  auto s = scenario("f_continuity");
  auto config = s.solver_config();
  auto theta = s.initial_field();
  const auto& c = *s.continuity;
  auto probe = [&](double eps) {
    std::vector<FourierMode> m{{c.k1, c.k2, eps, 0.0}};
    return continuity_probe(config, theta, theta + field_from_modes(config.grid, m), c.T, s.sample_interval);
  };
  auto p6 = probe(1e-6);
  auto p8 = probe(1e-8);
  auto bounded = [](const ContinuityResult& r) {
    for (const auto& [t, v] : r.ratio)
      if (v > std::exp(r.growth_rate * t) * (1 + 1e-12)) return false;
    return true;
  };
  double change = rel_change(p6.growth_rate, p8.growth_rate);
  bool ok = std::isfinite(p6.growth_rate) && bounded(p6) && bounded(p8) && change <= 0.3;
  return {ok, fmt("Lambda_L(1e-6)=%.6g Lambda_L(1e-8)=%.6g change=%.3g max_ratio=%.4g", p6.growth_rate,
                  p8.growth_rate, change, p6.max_ratio)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <scenario dir> [criterion ...]\n", argv[0]);
    return 2;
  }
  g_scenarios = argv[1];
  std::set<int> only;
  for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"single-mode exactness", single_mode},     {"energy inequality", energy},
      {"inviscid conservation", conservation},    {"decay envelopes", envelopes},
      {"de giorgi ladder", degiorgi},             {"holder machinery", holder},
      {"dissipation identity", dissipation},      {"absorbing entry", absorbing},
      {"semigroup and determinism", semigroup},   {"continuity probe", continuity}};

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
