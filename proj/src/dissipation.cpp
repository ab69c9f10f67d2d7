#include "sqg/dissipation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <tuple>

#include "sqg/error.hpp"
#include "sqg/norms.hpp"
#include "sqg/operators.hpp"

namespace sqg {
namespace {

// Periodically folded kernel w(y) h^2 / |y|^3 plus the scalar corrections.
struct FoldedKernel {
  std::vector<double> weights;    // K(m), m on the n x n torus
  std::vector<double> multiplier; // its discrete Fourier symbol (real, even)
  double total = 0.0;             // sum of weights over y != 0
  double taylor = 0.0;            // closed-form Gaussian integral minus its grid sum
  double tail = 0.0;              // int_{outside box} |y|^-3 dy
};

std::shared_ptr<const FoldedKernel> build_kernel(int n, const DissipationQuadrature& q) {
  if (q.images < 0 || !(q.taper_cells > 0.0)) {
    throw InputError("dissipation quadrature: images must be >= 0 and taper_cells > 0");
  }
  auto k = std::make_shared<FoldedKernel>();
  const double h = 1.0 / n;
  const double half_width = q.images + 0.5;
  const int M = q.images * n + n / 2;
  const double sigma = q.taper_cells * h;
  k->weights.assign(static_cast<std::size_t>(n) * n, 0.0);
  double gauss_sum = 0.0;
  for (int m1 = -M; m1 <= M; ++m1) {
    const double w1 = std::abs(m1) == M ? 0.5 : 1.0;
    for (int m2 = -M; m2 <= M; ++m2) {
      if (m1 == 0 && m2 == 0) {
        continue;
      }
      const double w = w1 * (std::abs(m2) == M ? 0.5 : 1.0) * h * h;
      const double r = h * std::hypot(m1, m2);
      const double kv = w / (r * r * r);
      const int i1 = ((m1 % n) + n) % n;
      const int i2 = ((m2 % n) + n) % n;
      k->weights[static_cast<std::size_t>(i1) * n + i2] += kv;
      k->total += kv;
      gauss_sum += 0.5 * w * std::exp(-(r * r) / (sigma * sigma)) / r;
    }
  }
  // int_{R^2} (a.y)^2 exp(-|y|^2/sigma^2) / |y|^3 dy = |a|^2 pi^{3/2} sigma / 2
  k->taylor = 0.5 * std::pow(std::numbers::pi, 1.5) * sigma - gauss_sum;
  // int over the complement of [-L, L]^2 of |y|^-3 dy = 4 sqrt(2) / L
  k->tail = 4.0 * std::numbers::sqrt2 / half_width;

  std::vector<Complex> spec(k->weights.size());
  plan_for(n).forward(k->weights, spec);
  k->multiplier.resize(spec.size());
  const double scale = static_cast<double>(n) * n;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    k->multiplier[i] = spec[i].real() * scale;
  }
  return k;
}

std::shared_ptr<const FoldedKernel> kernel_for(int n, const DissipationQuadrature& q) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, double>, std::shared_ptr<const FoldedKernel>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, q.images, q.taper_cells}];
  if (!slot) {
    slot = build_kernel(n, q);
  }
  return slot;
}

// Circular convolution of grid samples with the folded kernel.
std::vector<double> convolve(const FoldedKernel& k, std::span<const double> values, int n) {
  FftPlan& plan = plan_for(n);
  std::vector<Complex> spec(values.size());
  plan.forward(values, spec);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    spec[i] *= k.multiplier[i];
  }
  std::vector<double> out(values.size());
  plan.inverse(spec, out);
  return out;
}

struct Samples {
  std::vector<double> value;
  std::vector<double> grad_sq;
};

Samples sample_with_gradient(const SpectralField& phi) {
  auto [d1, d2] = gradient(phi);
  Samples s;
  s.value = phi.samples();
  const auto a = d1.samples();
  const auto b = d2.samples();
  s.grad_sq.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    s.grad_sq[i] = a[i] * a[i] + b[i] * b[i];
  }
  return s;
}

void accumulate_map(const SpectralField& phi, const FoldedKernel& k, std::vector<double>& out) {
  const int n = phi.grid().n();
  const Samples s = sample_with_gradient(phi);
  std::vector<double> sq(s.value.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    sq[i] = s.value[i] * s.value[i];
  }
  const auto conv = convolve(k, s.value, n);
  const auto conv_sq = convolve(k, sq, n);
  const double count = static_cast<double>(sq.size());
  const double mean = std::accumulate(s.value.begin(), s.value.end(), 0.0) / count;
  const double mean_sq = std::accumulate(sq.begin(), sq.end(), 0.0) / count;
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const double g = s.value[i];
    const double body = g * g * k.total - 2.0 * g * conv[i] + conv_sq[i];
    const double far = k.tail * (g * g - 2.0 * g * mean + mean_sq);
    out[i] += kDissipationConstant * (body + s.grad_sq[i] * k.taylor + far);
  }
}

}  // namespace

double dissipation_density(const SpectralField& phi, GridPoint x, const DissipationQuadrature& quad) {
  const int n = phi.grid().n();
  const auto k = kernel_for(n, quad);
  const Samples s = sample_with_gradient(phi);
  const int j1 = ((x.j1 % n) + n) % n;
  const int j2 = ((x.j2 % n) + n) % n;
  const std::size_t at = static_cast<std::size_t>(j1) * n + j2;
  const double g0 = s.value[at];
  double body = 0.0;
  double mean = 0.0;
  double mean_sq = 0.0;
  for (int m1 = 0; m1 < n; ++m1) {
    const int r1 = (j1 + m1) % n;
    for (int m2 = 0; m2 < n; ++m2) {
      const double gy = s.value[static_cast<std::size_t>(r1) * n + (j2 + m2) % n];
      const double d = g0 - gy;
      body += k->weights[static_cast<std::size_t>(m1) * n + m2] * d * d;
      mean += gy;
      mean_sq += gy * gy;
    }
  }
  const double count = static_cast<double>(n) * n;
  mean /= count;
  mean_sq /= count;
  const double far = k->tail * (g0 * g0 - 2.0 * g0 * mean + mean_sq);
  return std::max(0.0, kDissipationConstant * (body + s.grad_sq[at] * k->taylor + far));
}

std::vector<double> dissipation_density_map(const SpectralField& phi, const DissipationQuadrature& quad) {
  const auto k = kernel_for(phi.grid().n(), quad);
  std::vector<double> out(phi.grid().size(), 0.0);
  accumulate_map(phi, *k, out);
  for (auto& v : out) {
    v = std::max(0.0, v);
  }
  return out;
}

std::vector<double> gradient_dissipation_map(const SpectralField& phi, const DissipationQuadrature& quad) {
  const auto k = kernel_for(phi.grid().n(), quad);
  auto [d1, d2] = gradient(phi);
  std::vector<double> out(phi.grid().size(), 0.0);
  accumulate_map(d1, *k, out);
  accumulate_map(d2, *k, out);
  for (auto& v : out) {
    v = std::max(0.0, v);
  }
  return out;
}

DissipationCheck dissipation_integral_check(const SpectralField& field, const DissipationQuadrature& quad) {
  DissipationCheck r;
  const auto d = gradient_dissipation_map(field, quad);
  r.quadrature = 0.5 * std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
  r.spectral = hs_norm_squared(field, 1.5);
  if (r.spectral == 0.0 && r.quadrature == 0.0) {
    r.rel_err = 0.0;
  } else {
    r.rel_err = std::abs(r.quadrature - r.spectral) / std::max(std::abs(r.spectral), std::abs(r.quadrature));
  }
  return r;
}

}  // namespace sqg
