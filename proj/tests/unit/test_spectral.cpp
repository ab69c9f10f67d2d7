#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "sqg/dissipation.hpp"
#include "sqg/error.hpp"
#include "sqg/norms.hpp"
#include "sqg/operators.hpp"
#include "sqg/spectral_field.hpp"

using namespace sqg;

namespace {

constexpr double pi = std::numbers::pi;

// Direct evaluation of a mode sum at x = (j1/n, j2/n).
double direct(const std::vector<FourierMode>& modes, int n, int j1, int j2) {
  double s = 0.0;
  for (const auto& m : modes) {
    double ph = 2.0 * pi * (m.k1 * j1 + m.k2 * j2) / n;
    s += m.cos_amp * std::cos(ph) + m.sin_amp * std::sin(ph);
  }
  return s;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("grid wavenumber layout") {
  TorusGrid g(8);
  CHECK(g.wavenumber(3) == 3);
  CHECK(g.wavenumber(4) == -4);
  CHECK(g.wavenumber(7) == -1);
  CHECK(g.index_of(-1) == 7);
  CHECK(g.dealias_cutoff() == 2);
  CHECK(g.is_nyquist(-4));
  CHECK_THROWS(TorusGrid(7));
}

TEST_CASE("mode fields match direct summation") {
  const int n = 16;
  TorusGrid g(n);
  std::vector<FourierMode> modes{{1, 0, 1.0, 0.0}, {2, -3, 0.25, -0.5}, {0, 5, 0.0, 0.125}};
  auto f = field_from_modes(g, modes);
  auto s = f.samples();
  double err = 0.0;
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2) err = std::max(err, std::abs(s[g.flat(j1, j2)] - direct(modes, n, j1, j2)));
  CHECK(err < 1e-13);
  CHECK(std::abs(f.mode(1, 0) - Complex(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(f.mode(0, 5) - Complex(0.0, -0.0625)) < 1e-15);
  CHECK(f.hermitian_defect() < 1e-15);
}

TEST_CASE("forward and inverse transforms round trip") {
  const int n = 32;
  TorusGrid g(n);
  std::vector<double> x(g.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.37 * i) + 0.1 * std::cos(1.3 * i * i);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= x.size();
  auto fr = forward_transform(x, g);
  CHECK(fr.mean == doctest::Approx(mean).epsilon(1e-12));
  auto back = inverse_transform(fr.field);
  for (auto& v : back) v += mean;
  CHECK(max_abs_diff(back, x) < 1e-12);

  std::vector<double> bad(g.size(), 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(forward_transform(bad, g), InputError);
  CHECK_THROWS_AS(forward_transform(std::vector<double>(10), g), InputError);
}

TEST_CASE("fractional laplacian multiplies by (2 pi |k|)^s") {
  TorusGrid g(32);
  std::vector<FourierMode> modes{{3, 4, 1.0, 0.0}, {1, 1, 0.0, 2.0}};
  auto f = field_from_modes(g, modes);
  for (double s : {-1.0, 0.5, 1.0, 2.0}) {
    auto L = fractional_laplacian(f, s);
    CHECK(std::abs(L.mode(3, 4) - std::pow(2 * pi * 5.0, s) * f.mode(3, 4)) < 1e-10 * std::pow(2 * pi * 5.0, s));
    CHECK(std::abs(L.mode(1, 1) - std::pow(2 * pi * std::sqrt(2.0), s) * f.mode(1, 1)) < 1e-10 * 100);
  }
  auto back = fractional_laplacian(fractional_laplacian(f, 1.0), -1.0);
  CHECK(max_abs_diff(back.samples(), f.samples()) < 1e-13);
}

TEST_CASE("riesz velocity of a plane wave") {
  // theta = cos(2 pi x1): u = grad^perp Lambda^{-1} theta = (0, -sin(2 pi x1)).
  const int n = 16;
  TorusGrid g(n);
  std::vector<FourierMode> m{{1, 0, 1.0, 0.0}};
  auto [u1, u2] = riesz_velocity(field_from_modes(g, m));
  auto s1 = u1.samples();
  auto s2 = u2.samples();
  double e1 = 0.0, e2 = 0.0;
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2) {
      e1 = std::max(e1, std::abs(s1[g.flat(j1, j2)]));
      e2 = std::max(e2, std::abs(s2[g.flat(j1, j2)] + std::sin(2 * pi * j1 / n)));
    }
  CHECK(e1 < 1e-14);
  CHECK(e2 < 1e-14);

  auto r = random_band_limited(TorusGrid(32), 3, 10.0, 1.0);
  auto [v1, v2] = riesz_velocity(r);
  CHECK(divergence_defect(v1, v2) < 1e-12);
  // |u|_{L2} = |theta|_{L2} for a zero-mean field.
  CHECK(std::hypot(hs_norm(v1, 0), hs_norm(v2, 0)) == doctest::Approx(hs_norm(r, 0)).epsilon(1e-12));
}

TEST_CASE("norms agree with quadrature on the grid") {
  const int n = 32;
  TorusGrid g(n);
  std::vector<FourierMode> modes{{2, 1, 1.0, 0.0}, {0, 3, 0.0, 0.5}};
  auto f = field_from_modes(g, modes);
  auto s = f.samples();
  double l2 = 0.0;
  for (double v : s) l2 += v * v;
  l2 = std::sqrt(l2 / s.size());
  CHECK(hs_norm(f, 0.0) == doctest::Approx(l2).epsilon(1e-13));
  // ||f||_{H1}^2 = sum |2 pi k|^2 amp^2 / 2
  double h1 = std::sqrt(0.5 * std::pow(2 * pi, 2) * (5.0 * 1.0 + 9.0 * 0.25));
  CHECK(hs_norm(f, 1.0) == doctest::Approx(h1).epsilon(1e-13));
  CHECK(hs_norm_squared(f, 1.5) == doctest::Approx(std::pow(hs_norm(f, 1.5), 2)).epsilon(1e-13));
}

TEST_CASE("oversampled sup norm approaches the true maximum") {
  // cos(2 pi (x1 + x2) / ...) has its maximum off grid for an odd phase shift.
  TorusGrid g(8);
  std::vector<FourierMode> modes{{1, 0, std::cos(0.3), std::sin(0.3)}};
  auto f = field_from_modes(g, modes);
  double coarse = linf_norm(f, 1);
  double fine = linf_norm(f, 8);
  CHECK(coarse <= 1.0 + 1e-14);
  CHECK(fine <= 1.0 + 1e-14);
  CHECK(fine >= coarse);
  CHECK(fine > 0.999);
  auto up = oversampled_samples(f, 4);
  CHECK(up.size() == 32u * 32u);
  CHECK(up[0] == doctest::Approx(std::cos(0.3)).epsilon(1e-13));
}

TEST_CASE("holder seminorm of a plane wave") {
  // [cos(2 pi x1)]_{C^alpha} over shifts h = (m, 0)/n is max |2 sin(pi m / n)| / (m/n)^alpha.
  const int n = 64;
  TorusGrid g(n);
  std::vector<FourierMode> modes{{1, 0, 1.0, 0.0}};
  auto f = field_from_modes(g, modes);
  const double alpha = 0.25;
  auto probe = make_holder_probe(g, alpha, 0.0, 0.25, 1, 100000);
  double expected = 0.0;
  for (int m = 1; m <= n / 4; ++m)
    expected = std::max(expected, 2.0 * std::sin(pi * m / n) / std::pow(double(m) / n, alpha));
  double got = holder_seminorm(f, probe);
  CHECK(got >= expected * (1 - 1e-12));
  // Diagonal shifts reach the same bound only up to the grid-maximum pattern.
  CHECK(got <= expected * 1.05);

  // Refining the grid moves the discrete seminorm towards the continuum value.
  auto coarse = holder_seminorm(regrid(f, TorusGrid(16)), make_holder_probe(TorusGrid(16), alpha, 0.0));
  CHECK(coarse <= got * (1 + 1e-12));

  HolderProbeConfig bad = probe;
  bad.alpha = 0.5;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("dealiasing and shifts") {
  TorusGrid g(16);
  std::vector<FourierMode> modes{{5, 0, 1.0, 0.0}, {6, 1, 1.0, 0.0}};
  auto d = dealias(field_from_modes(g, modes));
  CHECK(std::abs(d.mode(5, 0)) > 0.4);
  CHECK(std::abs(d.mode(6, 1)) == 0.0);

  std::vector<FourierMode> one{{1, 2, 1.0, 0.0}};
  auto f = field_from_modes(g, one);
  auto s = shifted(f, Shift{3, -1}).samples();
  auto base = f.samples();
  double err = 0.0;
  for (int j1 = 0; j1 < 16; ++j1)
    for (int j2 = 0; j2 < 16; ++j2)
      err = std::max(err, std::abs(s[g.flat(j1, j2)] - base[g.flat((j1 + 3) % 16, (j2 + 15) % 16)]));
  CHECK(err < 1e-13);
}

TEST_CASE("random band-limited fields are seeded and grid independent") {
  auto a = random_band_limited(TorusGrid(32), 42, 4.0, 1.0);
  auto b = random_band_limited(TorusGrid(64), 42, 4.0, 1.0);
  CHECK(a == random_band_limited(TorusGrid(32), 42, 4.0, 1.0));
  CHECK(regrid(b, TorusGrid(32)) == a);
  CHECK(!(a == random_band_limited(TorusGrid(32), 43, 4.0, 1.0)));
  for (int k1 = -16; k1 < 16; ++k1)
    for (int k2 = -16; k2 < 16; ++k2)
      if (k1 * k1 + k2 * k2 > 16) CHECK(std::abs(a.mode(k1, k2)) == 0.0);
}

TEST_CASE("dissipation identity on band-limited fields") {
  auto f64 = random_band_limited(TorusGrid(64), 9, 4.0, 1.0);
  auto r64 = dissipation_integral_check(f64);
  auto r128 = dissipation_integral_check(regrid(f64, TorusGrid(128)));
  CHECK(r64.spectral == doctest::Approx(hs_norm_squared(f64, 1.5)).epsilon(1e-12));
  CHECK(r64.rel_err < 1e-2);
  CHECK(r128.rel_err < r64.rel_err);

  // Pointwise density of a plane wave: D[cos(2 pi k.x)] integrates to 2 (phi, Lambda phi).
  TorusGrid g(32);
  std::vector<FourierMode> m{{1, 0, 1.0, 0.0}};
  auto phi = field_from_modes(g, m);
  auto dmap = dissipation_density_map(phi);
  double mean = 0.0;
  for (double v : dmap) mean += v;
  mean /= dmap.size();
  CHECK(mean == doctest::Approx(2.0 * pi).epsilon(2e-2));
  CHECK(dissipation_density(phi, GridPoint{0, 0}) == doctest::Approx(dmap[0]).epsilon(1e-12));
}
