#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "sqg/checkpoint.hpp"
#include "sqg/error.hpp"
#include "sqg/norms.hpp"
#include "sqg/operators.hpp"
#include "sqg/solver.hpp"

using namespace sqg;

namespace {

constexpr double pi = std::numbers::pi;

SolverConfig config(int n, double kappa, double dt) {
  auto c = SolverConfig::make(kappa, TorusGrid(n));
  c.dt.dt = dt;
  return c;
}

}  // namespace

TEST_CASE("nonlinear term against a closed form") {
  // theta = cos(2 pi x1) + cos(4 pi x2) gives -(u . grad theta) = -2 pi sin(2 pi x1) sin(4 pi x2).
  const int n = 32;
  TorusGrid g(n);
  std::vector<FourierMode> m{{1, 0, 1.0, 0.0}, {0, 2, 1.0, 0.0}};
  auto N = nonlinear_term(field_from_modes(g, m)).samples();
  double err = 0.0;
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2) {
      double exact = -2 * pi * std::sin(2 * pi * j1 / n) * std::sin(4 * pi * j2 / n);
      err = std::max(err, std::abs(N[g.flat(j1, j2)] - exact));
    }
  CHECK(err < 1e-12);

  // A single plane wave is a steady solution of the transport part.
  std::vector<FourierMode> one{{2, 3, 0.7, -0.2}};
  CHECK(linf_norm(nonlinear_term(field_from_modes(g, one))) < 1e-12);
}

TEST_CASE("single mode decays at rate 2 pi kappa |k|") {
  const int n = 32;
  TorusGrid g(n);
  std::vector<FourierMode> m{{1, 0, 1.0, 0.0}};
  auto theta0 = field_from_modes(g, m);
  for (double kappa : {1.0, 0.3}) {
    auto rec = evolve(config(n, kappa, 1e-3), theta0, 1.0);
    double amp = rec.samples.back().linf;
    CHECK(amp == doctest::Approx(std::exp(-2 * pi * kappa)).epsilon(1e-10));
    // ||theta(t)||^2 + 2 kappa int ||Lambda^{1/2} theta||^2 = ||theta0||^2 for free decay.
    const auto& s = rec.samples.back();
    CHECK(s.l2 * s.l2 + 2 * kappa * s.int_half_sq == doctest::Approx(0.5).epsilon(1e-12));
  }

  auto imex = config(n, 1.0, 1e-2);
  imex.scheme = TimeScheme::Imex1;
  auto rec = evolve(imex, theta0, 0.5, EvolveOptions{0.5});
  CHECK(rec.samples.back().linf == doctest::Approx(std::pow(1.0 / (1.0 + 2 * pi * 1e-2), 50)).epsilon(1e-10));
}

TEST_CASE("inviscid step is second order") {
  auto raw = random_band_limited(TorusGrid(32), 11, 3.0, 1.0);
  auto theta0 = raw * (1.0 / linf_norm(raw));
  auto run = [&](double dt) {
    auto rec = SolverState{theta0, 0.0, 0};
    auto c = config(32, 0.0, dt);
    evolve_from(c, rec, 0.25, EvolveOptions{0.25});
    return rec.theta;
  };
  auto ref = run(1.0 / 2048);
  double e1 = hs_norm(run(1.0 / 64) - ref, 0);
  double e2 = hs_norm(run(1.0 / 128) - ref, 0);
  CHECK(e1 / e2 > 3.5);
  CHECK(e1 / e2 < 4.6);
}

TEST_CASE("semigroup property is bitwise with aligned steps") {
  auto c = config(32, 1.0, 1.0 / 512);
  c.forcing = field_from_modes(TorusGrid(32), std::vector<FourierMode>{{0, 1, 0.1, 0.0}});
  auto theta0 = random_band_limited(TorusGrid(32), 4, 4.0, 1.0);
  EvolveOptions opt{1.0 / 32};

  SolverState whole{theta0, 0.0, 0};
  evolve_from(c, whole, 0.5, opt);
  SolverState split{theta0, 0.0, 0};
  evolve_from(c, split, 0.25, opt);
  evolve_from(c, split, 0.25, opt);
  CHECK(whole.theta == split.theta);
  CHECK(whole.t == split.t);

  SolverState again{theta0, 0.0, 0};
  evolve_from(c, again, 0.5, opt);
  CHECK(again.theta == whole.theta);
}

TEST_CASE("sampling lands on multiples of the interval") {
  auto c = config(16, 1.0, 0.003);
  std::vector<FourierMode> m{{1, 1, 1.0, 0.0}};
  auto rec = evolve(c, field_from_modes(TorusGrid(16), m), 0.1, EvolveOptions{0.01, true, 3});
  REQUIRE(rec.samples.size() == 11);
  for (std::size_t i = 0; i < rec.samples.size(); ++i) CHECK(rec.samples[i].t == doctest::Approx(0.01 * i));
  CHECK(rec.snapshots.size() == 4);
  CHECK(rec.series("h1").size() == 11);
  CHECK_THROWS_AS(rec.series("nope"), InputError);
}

TEST_CASE("cfl step size") {
  auto c = config(16, 1.0, 1e-3);
  c.dt.kind = DtPolicy::Kind::Cfl;
  c.dt.safety = 0.5;
  c.dt.dt_max = 1.0;
  // theta = cos(2 pi x1) has |u| = |sin(2 pi x1)|, sup 1 on the grid.
  std::vector<FourierMode> m{{1, 0, 1.0, 0.0}};
  SolverState s{field_from_modes(TorusGrid(16), m), 0.0, 0};
  CHECK(cfl_dt(s, c) == doctest::Approx(0.5 / 16).epsilon(1e-12));
  c.dt.dt_max = 0.01;
  CHECK(cfl_dt(s, c) == 0.01);
}

TEST_CASE("configuration validation") {
  auto c = config(16, 1.5, 1e-3);
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = config(16, -0.1, 1e-3);
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = config(16, 0.0, 1e-3);
  CHECK_NOTHROW(c.validate());
  c = config(16, 1.0, 0.0);
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("blow-up guard aborts the run") {
  auto c = config(16, 1.0, 0.5);
  c.scheme = TimeScheme::Imex1;
  auto theta0 = random_band_limited(TorusGrid(16), 2, 5.0, 0.0) * 50.0;
  CHECK_THROWS_AS(evolve(c, theta0, 50.0, EvolveOptions{0.5}), SolverAbort);
}

TEST_CASE("checkpoint round trip") {
  auto theta = random_band_limited(TorusGrid(16), 8, 5.0, 1.0);
  SolverState s{theta, 0.125, 77};
  std::stringstream buf;
  write_checkpoint(buf, s, 0.5);
  auto bytes = buf.str();
  CHECK(bytes.substr(0, 4) == "SQGC");
  CHECK(bytes.size() == 4 + 4 + 4 + 8 + 8 + 8 + 16 * 16 * 16);
  auto back = read_checkpoint(buf);
  CHECK(back.kappa == 0.5);
  CHECK(back.state.t == 0.125);
  CHECK(back.state.step == 77);
  CHECK(back.state.theta == theta);

  std::stringstream bad("XXXX");
  CHECK_THROWS_AS(read_checkpoint(bad), InputError);
  std::stringstream cut(bytes.substr(0, 40));
  CHECK_THROWS_AS(read_checkpoint(cut), InputError);
}
