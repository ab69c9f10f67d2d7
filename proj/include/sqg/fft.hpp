#pragma once

#include <complex>
#include <span>

namespace sqg {

using Complex = std::complex<double>;

/// Real 2-D transform pair for an n x n torus grid, backed by FFTW.
///
/// Each plan owns aligned scratch buffers, so results depend only on the
/// input values. A plan must not be shared between threads; use plan_for()
/// which hands out one cached plan per (thread, n).
class FftPlan {
 public:
  explicit FftPlan(int n);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  int n() const noexcept { return n_; }

  /// coeffs[k] = n^-2 sum_x samples[x] e^{-2 pi i k.x}, full n x n Hermitian layout.
  void forward(std::span<const double> samples, std::span<Complex> coeffs);

  /// samples[x] = sum_k coeffs[k] e^{2 pi i k.x}; only the Hermitian part is used.
  void inverse(std::span<const Complex> coeffs, std::span<double> samples);

 private:
  int n_;
  int half_;
  double* real_ = nullptr;
  Complex* spec_ = nullptr;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

FftPlan& plan_for(int n);

}  // namespace sqg
