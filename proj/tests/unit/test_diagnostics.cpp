#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "sqg/diagnostics.hpp"
#include "sqg/error.hpp"
#include "sqg/norms.hpp"
#include "sqg/solver.hpp"

using namespace sqg;

namespace {

constexpr double pi = std::numbers::pi;

Series synthetic(double rate, double amp, double asym, double T, int points) {
  Series s;
  for (int i = 0; i <= points; ++i) {
    double t = T * i / points;
    s.emplace_back(t, amp * std::exp(-rate * t) + asym);
  }
  return s;
}

TrajectoryRecord single_mode_run(double T, double interval) {
  auto c = SolverConfig::make(1.0, TorusGrid(32));
  c.dt.dt = 1e-3;
  std::vector<FourierMode> m{{1, 0, 1.0, 0.0}};
  EvolveOptions opt{interval, true, 1};
  return evolve(c, field_from_modes(TorusGrid(32), m), T, opt);
}

}  // namespace

TEST_CASE("envelope fit recovers a synthetic exponential") {
  auto fit = fit_decay_envelope(synthetic(3.0, 2.0, 1.0, 2.0, 400), 1.0);
  CHECK(fit.rate == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(fit.prefactor == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fit.max_violation <= 1e-9);
  CHECK(fit(0.5) == doctest::Approx(2.0 * std::exp(-1.5) + 1.0).epsilon(1e-9));

  auto flat = fit_decay_envelope(Series{{0.0, 0.5}, {1.0, 0.4}}, 1.0);
  CHECK(flat.below_asymptote);
  CHECK(std::isinf(flat.rate));

  auto rising = fit_decay_envelope(Series{{0.0, 1.0}, {1.0, 2.0}}, 0.0);
  CHECK(rising.rate == 0.0);
  CHECK(rising.prefactor == doctest::Approx(2.0));

  CHECK_THROWS_AS(fit_decay_envelope(Series{}, 0.0), InputError);
  CHECK_THROWS_AS(fit_decay_envelope(Series{{0.0, -1.0}}, 0.0), InputError);
}

TEST_CASE("absorbing entry and series quadrature") {
  Series s{{0, 5}, {1, 3}, {2, 0.5}, {3, 1.5}, {4, 0.9}, {5, 0.8}};
  auto e = absorbing_entry_time(s, 1.0);
  CHECK(e.entered);
  CHECK(e.entry_time == 4.0);
  CHECK(e.entry_index == 4);
  CHECK_FALSE(absorbing_entry_time(s, 0.1).entered);

  Series lin{{0, 0}, {1, 2}, {3, 6}};
  CHECK(integrate_series(lin, 0.0, 3.0) == doctest::Approx(9.0));
  CHECK(integrate_series(lin, 0.5, 2.0) == doctest::Approx(4.0 - 0.25));
  CHECK(interpolate_series(lin, 2.0) == doctest::Approx(4.0));
  CHECK(interpolate_series(lin, 10.0) == 6.0);
}

TEST_CASE("truncation of a plane wave") {
  const int n = 64;
  std::vector<FourierMode> m{{1, 0, 1.0, 0.0}};
  auto theta = field_from_modes(TorusGrid(n), m);
  auto plus = truncate(theta, 0.0);
  // int cos_+ = 1/pi, int cos_+^2 = 1/4 (exact on the grid up to round-off).
  CHECK(plus.mean() == doctest::Approx(1.0 / pi).epsilon(1e-3));
  CHECK(plus.l1() == doctest::Approx(1.0 / pi).epsilon(1e-3));
  CHECK(plus.l2_squared() == doctest::Approx(0.25).epsilon(1e-12));

  auto minus = truncate(-1.0 * theta, 0.0);
  auto s = theta.samples();
  double err = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) err = std::max(err, std::abs(plus.samples()[i] - minus.samples()[i] - s[i]));
  CHECK(err < 1e-15);
  CHECK(plus.l2_squared() + minus.l2_squared() == doctest::Approx(0.5).epsilon(1e-12));

  auto none = truncate(theta, 2.0);
  CHECK(none.l2_squared() == 0.0);
  CHECK_THROWS_AS(truncate(theta, -1.0), InputError);
}

TEST_CASE("alpha choice and the xi profile") {
  CHECK(alpha_choice(1.0, 1.0) == doctest::Approx(1.0 / 64));
  CHECK(alpha_choice(2.0, 0.5, 128.0) == doctest::Approx(0.5 / 256));
  CHECK(alpha_choice(1e-3, 1.0) == 0.25);
  CHECK_THROWS_AS(alpha_choice(1.0, 1.0, 32.0), InputError);
  CHECK_THROWS_AS(alpha_choice(0.0, 1.0), InputError);

  CHECK(t_alpha(0.25, 1.0) == 2.0);
  // p = 1/2: xi(t) = (1 - t/2)^2.
  CHECK(xi_profile(1.0, 0.25, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(xi_profile(0.0, 0.25, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(xi_profile(3.0, 0.25, 1.0) == 0.0);
  // p = 3/5 at alpha = 1/10: xi(t) = (2^{3/5} - 3t/5)^{5/3} for xi0 = 2.
  double p = 0.6;
  CHECK(xi_profile(0.4, 0.1, 2.0) == doctest::Approx(std::pow(std::pow(2.0, p) - p * 0.4, 1.0 / p)).epsilon(1e-13));
  CHECK(t_alpha(0.1, 2.0) == doctest::Approx(std::pow(2.0, p) / p).epsilon(1e-14));
  CHECK_THROWS_AS(xi_profile(0.1, 0.0, 1.0), InputError);
  for (double a : {0.01, 0.1, 0.25}) CHECK(xi_ode_residual(a, 1.0) <= 1e-8);
}

TEST_CASE("ledger radii follow their formulas") {
  ConstantsLedger L;
  L.kappa = 0.5;
  L.f_linf = 0.2;
  L.theta0_linf = 3.0;
  L.c0.value = 4.0;
  CHECK(L.b_inf_radius() == doctest::Approx(2 * 0.2 / (4.0 * 0.5)));
  CHECK(L.k_inf() == doctest::Approx(3.0 + 0.2 / 2.0));
  CHECK(L.alpha() == doctest::Approx(0.5 / (64 * 3.1)));
  CHECK(L.ball_alpha() == doctest::Approx(std::min(0.25, 0.5 / (64 * 0.3))));
  CHECK_THROWS_AS(L.b_alpha_radius(), InputError);
  L.c1.value = 3.0;
  CHECK(L.b_alpha_radius() == doctest::Approx(3.0 * 0.2 / 0.5));
  CHECK_NOTHROW(L.validate());
  L.c2.value = -1.0;
  CHECK_THROWS_AS(L.validate(), InputError);
}

TEST_CASE("energy inequality on free decay") {
  auto rec = single_mode_run(1.0, 0.01);
  SpectralField zero(TorusGrid(32));
  auto r = energy_inequality_check(rec, 1.0, zero, 2 * pi);
  CHECK(r.passed());
  CHECK(r.value("balance_rel") < 1e-12);
  CHECK(std::isinf(fit_energy_c0(rec, 1.0, zero)));

  // value(t) = e^{-2 pi t} decays exactly at c0 kappa = 2 pi.
  Series s = synthetic(2 * pi, 1.0, 0.0, 1.0, 100);
  CHECK(fit_decay_c0(s, 1.0, 0.0) == doctest::Approx(2 * pi).epsilon(1e-8));
  CHECK(fit_decay_c0(s, 0.5, 0.0) == doctest::Approx(4 * pi).epsilon(1e-8));

  auto L = ledger_from_decay(rec);
  CHECK(L.c0.value == doctest::Approx(2 * pi).epsilon(1e-6));
  auto d = decay_envelope_check(rec, L, "l2");
  CHECK(d.fitted == doctest::Approx(2 * pi).epsilon(1e-2));
}

TEST_CASE("de giorgi ladder on a decaying wave") {
  auto rec = single_mode_run(1.0, 0.005);
  double q0 = degiorgi_q0(rec);
  CHECK(q0 > 0.0);
  auto level = degiorgi_auto_level(rec);
  auto ok = degiorgi_ladder(rec, level.M);
  CHECK(ok.Q[0] == doctest::Approx(q0));
  CHECK(ok.converged);
  CHECK(ok.geometric);
  CHECK(ok.audit_holds);
  for (std::size_t k = 1; k < ok.eta.size(); ++k) CHECK(ok.eta[k] == doctest::Approx(level.M * (1 - std::pow(2.0, -double(k)))));

  auto low = degiorgi_ladder(rec, std::sqrt(q0) / 100);
  CHECK_FALSE(low.converged);
  CHECK_FALSE(degiorgi_check(low).passed());

  auto thin = evolve(SolverConfig::make(1.0, TorusGrid(16)),
                     field_from_modes(TorusGrid(16), std::vector<FourierMode>{{1, 0, 1, 0}}), 1.0,
                     EvolveOptions{0.05, true, 1});
  CHECK_THROWS_AS(degiorgi_ladder(thin, 1.0), InputError);
}

TEST_CASE("nonlinear lower bound is scale invariant") {
  auto theta = random_band_limited(TorusGrid(32), 21, 5.0, 1.0);
  GridPoint x{3, 7};
  Shift h{2, 1};
  auto a = nonlinear_lower_bound_probe(theta, x, h, 0.1, 0.05);
  auto b = nonlinear_lower_bound_probe(theta * 7.5, x, h, 0.1, 0.05);
  CHECK(a.lhs > 0.0);
  CHECK(b.lhs == doctest::Approx(a.lhs * 7.5 * 7.5).epsilon(1e-10));
  CHECK(b.c2_est == doctest::Approx(a.c2_est).epsilon(1e-10));
  CHECK_THROWS_AS(nonlinear_lower_bound_probe(theta, x, Shift{0, 0}, 0.1, 0.05), InputError);

  auto samp = sample_lower_bound(theta, 0.1, 0.05, 50, 1);
  CHECK(samp.evaluated + samp.skipped == 50);
  CHECK(samp.c2_max >= samp.c2_median);
  CHECK(fit_gradient_lower_bound(theta, 0.1, 10.0) > 0.0);
}

TEST_CASE("continuity probe of identical data") {
  auto c = SolverConfig::make(1.0, TorusGrid(16));
  auto theta = random_band_limited(TorusGrid(16), 2, 3.0, 1.0);
  auto r = continuity_probe(c, theta, theta, 0.1);
  CHECK(r.identical);
  CHECK(r.growth_rate == 0.0);
  for (const auto& [t, v] : r.ratio) CHECK(v == 1.0);

  auto pert = theta + field_from_modes(TorusGrid(16), std::vector<FourierMode>{{1, 0, 1e-6, 0}});
  auto p = continuity_probe(c, theta, pert, 0.1);
  CHECK_FALSE(p.identical);
  CHECK(p.initial_distance == doctest::Approx(2 * pi * 1e-6 / std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("check runner") {
  auto rec = single_mode_run(1.0, 0.01);
  CHECK_THROWS_AS(run_checks(rec, {"no_such_check"}), InputError);
  auto run = run_checks(rec, {"energy_inequality", "decay_l2", "conservation"});
  REQUIRE(run.reports.size() == 3);
  CHECK(run.reports[0].name == "conservation");
  CHECK(run.reports[1].name == "decay_l2");
  CHECK(run.reports[2].name == "energy_inequality");
  CHECK(run.reports[1].passed());
  CHECK(run.reports[2].passed());
}
