#include "sqg/operators.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sqg/error.hpp"

namespace sqg {
namespace {

// Odd (derivative-like) factor of k_j: zero on the unpaired Nyquist line.
double odd_component(const TorusGrid& g, int k) { return g.is_nyquist(k) ? 0.0 : static_cast<double>(k); }

template <class F>
SpectralField map_modes(const SpectralField& field, F&& f) {
  const TorusGrid& g = field.grid();
  std::vector<Complex> out(g.size());
  auto in = field.coefficients();
  for (int i1 = 0; i1 < g.n(); ++i1) {
    const int k1 = g.wavenumber(i1);
    for (int i2 = 0; i2 < g.n(); ++i2) {
      const std::size_t idx = g.flat(i1, i2);
      out[idx] = f(k1, g.wavenumber(i2), in[idx]);
    }
  }
  return SpectralField::adopt(g, std::move(out));
}

}  // namespace

SpectralField fractional_laplacian(const SpectralField& field, double s) {
  if (!(s >= -2.0 && s <= 2.0)) {
    throw InputError("fractional_laplacian: power must lie in [-2, 2]");
  }
  if (s == 0.0) {
    return field;
  }
  return map_modes(field, [s](int k1, int k2, Complex c) {
    if (k1 == 0 && k2 == 0) {
      return Complex{};
    }
    return c * std::pow(kTwoPi * std::hypot(k1, k2), s);
  });
}

std::pair<SpectralField, SpectralField> riesz_velocity(const SpectralField& theta) {
  const TorusGrid& g = theta.grid();
  auto u1 = map_modes(theta, [&g](int k1, int k2, Complex c) {
    if (k1 == 0 && k2 == 0) return Complex{};
    return Complex(0.0, -odd_component(g, k2) / std::hypot(k1, k2)) * c;
  });
  auto u2 = map_modes(theta, [&g](int k1, int k2, Complex c) {
    if (k1 == 0 && k2 == 0) return Complex{};
    return Complex(0.0, odd_component(g, k1) / std::hypot(k1, k2)) * c;
  });
  return {std::move(u1), std::move(u2)};
}

std::pair<SpectralField, SpectralField> gradient(const SpectralField& field) {
  const TorusGrid& g = field.grid();
  auto d1 = map_modes(field, [&g](int k1, int, Complex c) { return Complex(0.0, kTwoPi * odd_component(g, k1)) * c; });
  auto d2 = map_modes(field, [&g](int, int k2, Complex c) { return Complex(0.0, kTwoPi * odd_component(g, k2)) * c; });
  return {std::move(d1), std::move(d2)};
}

SpectralField dealias(const SpectralField& field) {
  const int cut = field.grid().dealias_cutoff();
  return map_modes(field, [cut](int k1, int k2, Complex c) {
    return (std::abs(k1) > cut || std::abs(k2) > cut) ? Complex{} : c;
  });
}

SpectralField shifted(const SpectralField& field, Shift h) {
  const double n = field.grid().n();
  const TorusGrid& g = field.grid();
  return map_modes(field, [&](int k1, int k2, Complex c) {
    // Nyquist modes pick up a real factor (-1)^m so the result stays real.
    if (g.is_nyquist(k1) || g.is_nyquist(k2)) {
      const double a1 = g.is_nyquist(k1) ? std::cos(std::numbers::pi * h.m1) : 1.0;
      const double a2 = g.is_nyquist(k2) ? std::cos(std::numbers::pi * h.m2) : 1.0;
      const double p1 = g.is_nyquist(k1) ? 0.0 : kTwoPi * k1 * h.m1 / n;
      const double p2 = g.is_nyquist(k2) ? 0.0 : kTwoPi * k2 * h.m2 / n;
      return c * a1 * a2 * std::polar(1.0, p1 + p2);
    }
    return c * std::polar(1.0, kTwoPi * (static_cast<double>(k1) * h.m1 + static_cast<double>(k2) * h.m2) / n);
  });
}

SpectralField finite_difference(const SpectralField& field, Shift h) { return shifted(field, h) - field; }

double divergence_defect(const SpectralField& u1, const SpectralField& u2) {
  const TorusGrid& g = u1.grid();
  if (!(g == u2.grid())) {
    throw InputError("divergence_defect: grids differ");
  }
  double worst = 0.0;
  for (int i1 = 0; i1 < g.n(); ++i1) {
    const double k1 = odd_component(g, g.wavenumber(i1));
    for (int i2 = 0; i2 < g.n(); ++i2) {
      const double k2 = odd_component(g, g.wavenumber(i2));
      const std::size_t idx = g.flat(i1, i2);
      worst = std::max(worst, std::abs(kTwoPi * (k1 * u1.coefficients()[idx] + k2 * u2.coefficients()[idx])));
    }
  }
  return worst;
}

}  // namespace sqg
