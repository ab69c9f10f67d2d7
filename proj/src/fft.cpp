#include "sqg/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

#include "sqg/error.hpp"

namespace sqg {
namespace {

// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftPlan::FftPlan(int n) : n_(n), half_(n / 2 + 1) {
  const std::size_t nreal = static_cast<std::size_t>(n) * n;
  const std::size_t nspec = static_cast<std::size_t>(n) * half_;
  std::lock_guard lock(planner_mutex());
  real_ = fftw_alloc_real(nreal);
  spec_ = reinterpret_cast<Complex*>(fftw_alloc_complex(nspec));
  if (real_ == nullptr || spec_ == nullptr) {
    throw std::bad_alloc();
  }
  auto* spec = reinterpret_cast<fftw_complex*>(spec_);
  // FFTW_ESTIMATE keeps the chosen algorithm (and so the bits) identical run to run.
  fwd_ = fftw_plan_dft_r2c_2d(n, n, real_, spec, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_c2r_2d(n, n, spec, real_, FFTW_ESTIMATE);
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(real_);
  fftw_free(spec_);
}

void FftPlan::forward(std::span<const double> samples, std::span<Complex> coeffs) {
  const std::size_t total = static_cast<std::size_t>(n_) * n_;
  if (samples.size() != total || coeffs.size() != total) {
    throw InputError("FftPlan::forward: size mismatch");
  }
  std::memcpy(real_, samples.data(), total * sizeof(double));
  fftw_execute(static_cast<fftw_plan>(fwd_));
  const double scale = 1.0 / static_cast<double>(total);
  for (int i1 = 0; i1 < n_; ++i1) {
    const int c1 = (n_ - i1) % n_;
    for (int i2 = 0; i2 < half_; ++i2) {
      const Complex c = spec_[static_cast<std::size_t>(i1) * half_ + i2] * scale;
      coeffs[static_cast<std::size_t>(i1) * n_ + i2] = c;
      const int c2 = (n_ - i2) % n_;
      if (c2 >= half_) {
        coeffs[static_cast<std::size_t>(c1) * n_ + c2] = std::conj(c);
      }
    }
  }
}

void FftPlan::inverse(std::span<const Complex> coeffs, std::span<double> samples) {
  const std::size_t total = static_cast<std::size_t>(n_) * n_;
  if (samples.size() != total || coeffs.size() != total) {
    throw InputError("FftPlan::inverse: size mismatch");
  }
  for (int i1 = 0; i1 < n_; ++i1) {
    std::memcpy(spec_ + static_cast<std::size_t>(i1) * half_, coeffs.data() + static_cast<std::size_t>(i1) * n_,
                static_cast<std::size_t>(half_) * sizeof(Complex));
  }
  fftw_execute(static_cast<fftw_plan>(bwd_));
  std::memcpy(samples.data(), real_, total * sizeof(double));
}

FftPlan& plan_for(int n) {
  thread_local std::map<int, std::unique_ptr<FftPlan>> cache;
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<FftPlan>(n);
  }
  return *slot;
}

}  // namespace sqg
