#include "sqg/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sqg/error.hpp"

namespace sqg {

SpectralField::SpectralField(TorusGrid grid) : grid_(grid), coeffs_(grid.size(), Complex{}) {}

SpectralField::SpectralField(TorusGrid grid, std::vector<Complex> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) {
    throw InputError("coefficient array has " + std::to_string(coeffs_.size()) + " entries, grid needs " +
                     std::to_string(grid_.size()));
  }
  coeffs_[0] = Complex{};
}

SpectralField SpectralField::adopt(TorusGrid grid, std::vector<Complex> coeffs) {
  return SpectralField(grid, std::move(coeffs));
}

SpectralField SpectralField::from_coefficients(TorusGrid grid, std::vector<Complex> coeffs) {
  SpectralField f(grid, std::move(coeffs));
  const int n = grid.n();
  auto& c = f.coeffs_;
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const std::size_t a = grid.flat(i1, i2);
      const std::size_t b = grid.flat((n - i1) % n, (n - i2) % n);
      if (b < a) {
        continue;
      }
      if (!std::isfinite(c[a].real()) || !std::isfinite(c[a].imag())) {
        throw InputError("non-finite Fourier coefficient");
      }
      const Complex avg = 0.5 * (c[a] + std::conj(c[b]));
      c[a] = avg;
      c[b] = std::conj(avg);
    }
  }
  c[0] = Complex{};
  return f;
}

std::vector<double> SpectralField::samples() const { return inverse_transform(*this); }

bool SpectralField::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) { return c == Complex{}; });
}

double SpectralField::hermitian_defect() const noexcept {
  const int n = grid_.n();
  double worst = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const Complex a = coeffs_[grid_.flat(i1, i2)];
      const Complex b = coeffs_[grid_.flat((n - i1) % n, (n - i2) % n)];
      worst = std::max(worst, std::abs(a - std::conj(b)));
    }
  }
  return worst;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (!(grid_ == other.grid_)) {
    throw InputError("field grids differ");
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    coeffs_[i] += other.coeffs_[i];
  }
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (!(grid_ == other.grid_)) {
    throw InputError("field grids differ");
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    coeffs_[i] -= other.coeffs_[i];
  }
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) {
    c *= s;
  }
  return *this;
}

ForwardResult forward_transform(std::span<const double> samples, TorusGrid grid) {
  if (samples.size() != grid.size()) {
    throw InputError("forward_transform: expected " + std::to_string(grid.size()) + " samples, got " +
                     std::to_string(samples.size()));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) {
      throw InputError("forward_transform: non-finite sample at index " + std::to_string(i));
    }
  }
  std::vector<Complex> coeffs(grid.size());
  plan_for(grid.n()).forward(samples, coeffs);
  const double mean = coeffs[0].real();
  return {SpectralField::adopt(grid, std::move(coeffs)), mean};
}

std::vector<double> inverse_transform(const SpectralField& field) {
  std::vector<double> out(field.grid().size());
  plan_for(field.grid().n()).inverse(field.coefficients(), out);
  return out;
}

std::vector<double> oversampled_samples(const SpectralField& field, int factor) {
  if (factor < 1) {
    throw InputError("oversampling factor must be >= 1");
  }
  if (factor == 1) {
    return field.samples();
  }
  const TorusGrid& g = field.grid();
  const TorusGrid fine(g.n() * factor);
  std::vector<Complex> padded(fine.size(), Complex{});
  const int n = g.n();
  for (int i1 = 0; i1 < n; ++i1) {
    const int k1 = g.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      const int k2 = g.wavenumber(i2);
      Complex c = field.coefficients()[g.flat(i1, i2)];
      // An unpaired Nyquist mode is cos-like: split it across +-n/2.
      const bool ny1 = g.is_nyquist(k1);
      const bool ny2 = g.is_nyquist(k2);
      if (ny1) c *= 0.5;
      if (ny2) c *= 0.5;
      for (int s1 = 0; s1 < (ny1 ? 2 : 1); ++s1) {
        for (int s2 = 0; s2 < (ny2 ? 2 : 1); ++s2) {
          const int q1 = s1 == 1 ? -k1 : k1;
          const int q2 = s2 == 1 ? -k2 : k2;
          padded[fine.flat_mode(q1, q2)] += c;
        }
      }
    }
  }
  std::vector<double> out(fine.size());
  plan_for(fine.n()).inverse(padded, out);
  return out;
}

SpectralField field_from_modes(TorusGrid grid, std::span<const FourierMode> modes) {
  std::vector<Complex> c(grid.size(), Complex{});
  const int half = grid.n() / 2;
  for (const auto& m : modes) {
    if (m.k1 == 0 && m.k2 == 0) {
      throw InputError("mode (0,0) is not allowed: fields have zero mean");
    }
    if (std::abs(m.k1) >= half || std::abs(m.k2) >= half) {
      throw InputError("mode (" + std::to_string(m.k1) + "," + std::to_string(m.k2) +
                       ") does not fit a grid of size " + std::to_string(grid.n()));
    }
    // a cos(2 pi k.x) + b sin(2 pi k.x) = (a - i b)/2 e^{ik.x} + (a + i b)/2 e^{-ik.x}
    c[grid.flat_mode(m.k1, m.k2)] += Complex(0.5 * m.cos_amp, -0.5 * m.sin_amp);
    c[grid.flat_mode(-m.k1, -m.k2)] += Complex(0.5 * m.cos_amp, 0.5 * m.sin_amp);
  }
  return SpectralField::adopt(grid, std::move(c));
}

SpectralField random_band_limited(TorusGrid grid, unsigned long long seed, double kmax, double slope) {
  if (!(kmax >= 1.0)) {
    throw InputError("random_band_limited: kmax must be >= 1");
  }
  const int K = static_cast<int>(std::floor(kmax));
  if (K >= grid.n() / 2) {
    throw InputError("random_band_limited: kmax does not fit the grid");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::vector<Complex> c(grid.size(), Complex{});
  for (int k1 = 0; k1 <= K; ++k1) {
    for (int k2 = -K; k2 <= K; ++k2) {
      if (k1 == 0 && k2 <= 0) {
        continue;
      }
      const double r = std::hypot(k1, k2);
      if (r > kmax) {
        continue;
      }
      const double amp = std::pow(r, -slope);
      const Complex z = std::polar(amp, phase(rng));
      c[grid.flat_mode(k1, k2)] = z;
      c[grid.flat_mode(-k1, -k2)] = std::conj(z);
    }
  }
  return SpectralField::adopt(grid, std::move(c));
}

SpectralField regrid(const SpectralField& field, TorusGrid target) {
  const TorusGrid& g = field.grid();
  std::vector<Complex> c(target.size(), Complex{});
  const int lim = std::min(g.n(), target.n()) / 2;
  for (int i1 = 0; i1 < g.n(); ++i1) {
    const int k1 = g.wavenumber(i1);
    for (int i2 = 0; i2 < g.n(); ++i2) {
      const int k2 = g.wavenumber(i2);
      if (std::abs(k1) >= lim || std::abs(k2) >= lim) {
        continue;
      }
      c[target.flat_mode(k1, k2)] = field.coefficients()[g.flat(i1, i2)];
    }
  }
  return SpectralField::adopt(target, std::move(c));
}

}  // namespace sqg
