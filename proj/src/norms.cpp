#include "sqg/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqg/error.hpp"

namespace sqg {

double hs_norm_squared(const SpectralField& field, double s) {
  if (!(s >= 0.0 && s <= 2.0)) {
    throw InputError("hs_norm: order must lie in [0, 2]");
  }
  const TorusGrid& g = field.grid();
  auto c = field.coefficients();
  double acc = 0.0;
  for (int i1 = 0; i1 < g.n(); ++i1) {
    const int k1 = g.wavenumber(i1);
    for (int i2 = 0; i2 < g.n(); ++i2) {
      const int k2 = g.wavenumber(i2);
      if (k1 == 0 && k2 == 0) {
        continue;
      }
      const double w = s == 0.0 ? 1.0 : std::pow(kTwoPi * std::hypot(k1, k2), 2.0 * s);
      acc += w * std::norm(c[g.flat(i1, i2)]);
    }
  }
  return acc;
}

double hs_norm(const SpectralField& field, double s) { return std::sqrt(hs_norm_squared(field, s)); }

double linf_norm(const SpectralField& field, int oversample) {
  const auto v = oversampled_samples(field, oversample);
  double m = 0.0;
  for (double x : v) {
    m = std::max(m, std::abs(x));
  }
  return m;
}

double shift_length(Shift h, int grid_n) { return std::hypot(h.m1, h.m2) / grid_n; }

void HolderProbeConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 0.25)) {
    throw InputError("Holder probe: alpha must lie in (0, 1/4], got " + std::to_string(alpha));
  }
  if (!(xi >= 0.0) || !std::isfinite(xi)) {
    throw InputError("Holder probe: xi must be finite and >= 0");
  }
  if (grid_n <= 0 || oversample < 1) {
    throw InputError("Holder probe: grid size not set");
  }
  if (shifts.empty()) {
    throw InputError("Holder probe: empty shift set");
  }
  for (const auto& h : shifts) {
    if (std::abs(h.m1) > grid_n / 2 || std::abs(h.m2) > grid_n / 2 || shift_length(h, grid_n) > 0.5 + 1e-15) {
      throw InputError("Holder probe: shift longer than 1/2");
    }
    if (h.m1 == 0 && h.m2 == 0 && xi == 0.0) {
      throw InputError("Holder probe: h = 0 requires xi > 0");
    }
  }
}

std::vector<Shift> default_shift_set(int grid_n, double radius, std::size_t max_shifts) {
  if (!(radius > 0.0 && radius <= 0.5)) {
    throw InputError("shift radius must lie in (0, 1/2]");
  }
  const int r = static_cast<int>(std::floor(radius * grid_n));
  std::vector<Shift> all;
  for (int m1 = 0; m1 <= r; ++m1) {
    for (int m2 = -r; m2 <= r; ++m2) {
      if (m1 == 0 && m2 <= 0) {
        continue;
      }
      if (shift_length({m1, m2}, grid_n) <= radius + 1e-15) {
        all.push_back({m1, m2});
      }
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const Shift& a, const Shift& b) {
    return a.m1 * a.m1 + a.m2 * a.m2 < b.m1 * b.m1 + b.m2 * b.m2;
  });
  if (max_shifts == 0 || all.size() <= max_shifts) {
    return all;
  }
  // Keep the shortest half of the budget intact, stride through the rest.
  const std::size_t keep = max_shifts / 2;
  std::vector<Shift> out(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep));
  const std::size_t rest = all.size() - keep;
  const std::size_t budget = max_shifts - keep;
  for (std::size_t i = 0; i < budget; ++i) {
    out.push_back(all[keep + (i * rest) / budget]);
  }
  return out;
}

HolderProbeConfig make_holder_probe(const TorusGrid& grid, double alpha, double xi, double radius, int oversample,
                                    std::size_t max_shifts) {
  HolderProbeConfig p;
  p.alpha = alpha;
  p.xi = xi;
  p.oversample = oversample;
  p.grid_n = grid.n() * oversample;
  p.shifts = default_shift_set(p.grid_n, radius, max_shifts);
  p.validate();
  return p;
}

double holder_seminorm(const SpectralField& field, const HolderProbeConfig& probe) {
  probe.validate();
  const int n = field.grid().n() * probe.oversample;
  if (n != probe.grid_n) {
    throw InputError("Holder probe was built for a grid of " + std::to_string(probe.grid_n) + " points, field has " +
                     std::to_string(n));
  }
  const auto s = oversampled_samples(field, probe.oversample);
  const double xi2 = probe.xi * probe.xi;
  double best = 0.0;
  for (const auto& h : probe.shifts) {
    const double len = shift_length(h, n);
    const double denom = std::pow(xi2 + len * len, 0.5 * probe.alpha);
    const int d1 = ((h.m1 % n) + n) % n;
    const int d2 = ((h.m2 % n) + n) % n;
    double local = 0.0;
    for (int j1 = 0; j1 < n; ++j1) {
      const int r1 = (j1 + d1) % n;
      const double* row = s.data() + static_cast<std::size_t>(j1) * n;
      const double* srow = s.data() + static_cast<std::size_t>(r1) * n;
#pragma omp simd reduction(max : local)
      for (int j2 = 0; j2 < n - d2; ++j2) {
        const double d = std::abs(srow[j2 + d2] - row[j2]);
        local = d > local ? d : local;
      }
#pragma omp simd reduction(max : local)
      for (int j2 = n - d2; j2 < n; ++j2) {
        const double d = std::abs(srow[j2 + d2 - n] - row[j2]);
        local = d > local ? d : local;
      }
    }
    best = std::max(best, local / denom);
  }
  return best;
}

}  // namespace sqg
