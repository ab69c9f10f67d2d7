#pragma once

#include <limits>
#include <utility>
#include <vector>

namespace sqg {

using Series = std::vector<std::pair<double, double>>;

/// value(t) <= prefactor * exp(-rate (t - t_start)) + asymptote.
struct EnvelopeFit {
  double rate = 0.0;
  double prefactor = 0.0;
  double asymptote = 0.0;
  double t_start = 0.0;
  double max_violation = 0.0;  ///< largest relative exceedance (<= 1e-9 by construction)
  bool below_asymptote = false; ///< every value <= asymptote: rate = +inf, prefactor = 0

  double operator()(double t) const;
};

/// Largest decay rate for which the envelope anchored at the first sample,
/// prefactor = value(t_start) - asymptote, still dominates the series; then
/// prefactor = max (value - asymptote) e^{rate (t - t_start)}.
/// Rates are non-negative: a series that rises above its first excess gets
/// rate 0. Throws InputError on an empty series or a negative value.
EnvelopeFit fit_decay_envelope(const Series& series, double asymptote);

struct AbsorbingEntry {
  bool entered = false;
  double entry_time = std::numeric_limits<double>::quiet_NaN();
  std::size_t entry_index = 0;
};

/// Earliest sample time after which every later sample is <= radius.
AbsorbingEntry absorbing_entry_time(const Series& series, double radius);

/// Exact integral over [a, b] of the piecewise-linear interpolant of a series.
double integrate_series(const Series& series, double a, double b);

/// Piecewise-linear interpolation (clamped at the ends).
double interpolate_series(const Series& series, double t);

}  // namespace sqg
