#include "sqg/envelope.hpp"

#include <algorithm>
#include <cmath>

#include "sqg/error.hpp"

namespace sqg {

namespace {

// max_i excess_i * exp(rate (t_i - t0))
double scaled_peak(const Series& s, double asymptote, double rate) {
  const double t0 = s.front().first;
  double peak = 0.0;
  for (const auto& [t, v] : s) peak = std::max(peak, (v - asymptote) * std::exp(rate * (t - t0)));
  return peak;
}

}  // namespace

double EnvelopeFit::operator()(double t) const {
  if (below_asymptote) return asymptote;
  return prefactor * std::exp(-rate * (t - t_start)) + asymptote;
}

EnvelopeFit fit_decay_envelope(const Series& series, double asymptote) {
  if (series.empty()) throw InputError("fit_decay_envelope: empty series");
  for (const auto& [t, v] : series) {
    if (!std::isfinite(t) || !std::isfinite(v)) throw InputError("fit_decay_envelope: non-finite sample");
    if (v < 0.0) throw InputError("fit_decay_envelope: negative value");
  }
  for (std::size_t i = 1; i < series.size(); ++i)
    if (!(series[i].first > series[i - 1].first))
      throw InputError("fit_decay_envelope: times must be strictly increasing");

  EnvelopeFit fit;
  fit.asymptote = asymptote;
  fit.t_start = series.front().first;

  const bool all_below = std::all_of(series.begin(), series.end(), [&](const auto& p) { return p.second <= asymptote; });
  if (all_below) {
    fit.rate = std::numeric_limits<double>::infinity();
    fit.prefactor = 0.0;
    fit.below_asymptote = true;
    return fit;
  }

  const double a0 = series.front().second - asymptote;
  double rate = 0.0;
  if (a0 > 0.0 && series.size() > 1) {
    const double cap = a0 * (1.0 + 1e-12);
    auto ok = [&](double r) { return scaled_peak(series, asymptote, r) <= cap; };
    if (ok(0.0)) {
      double lo = 0.0, hi = 1.0;
      while (ok(hi) && hi < 1e12) {
        lo = hi;
        hi *= 2.0;
      }
      if (ok(hi)) {
        lo = hi;
      } else {
        for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          (ok(mid) ? lo : hi) = mid;
        }
      }
      rate = lo;
    }
  }
  fit.rate = rate;
  fit.prefactor = scaled_peak(series, asymptote, rate);

  double worst = 0.0;
  for (const auto& [t, v] : series) {
    const double env = fit(t);
    if (v > env) worst = std::max(worst, (v - env) / std::max(env, std::numeric_limits<double>::min()));
  }
  fit.max_violation = worst;
  return fit;
}

AbsorbingEntry absorbing_entry_time(const Series& series, double radius) {
  if (series.empty()) throw InputError("absorbing_entry_time: empty series");
  AbsorbingEntry out;
  std::size_t i = series.size();
  while (i > 0 && series[i - 1].second <= radius) --i;
  if (i == series.size()) return out;
  out.entered = true;
  out.entry_index = i;
  out.entry_time = series[i].first;
  return out;
}

double interpolate_series(const Series& s, double t) {
  if (s.empty()) throw InputError("interpolate_series: empty series");
  if (t <= s.front().first) return s.front().second;
  if (t >= s.back().first) return s.back().second;
  auto it = std::upper_bound(s.begin(), s.end(), t, [](double x, const auto& p) { return x < p.first; });
  const auto& [t1, v1] = *it;
  const auto& [t0, v0] = *(it - 1);
  const double w = (t - t0) / (t1 - t0);
  return v0 + w * (v1 - v0);
}

double integrate_series(const Series& s, double a, double b) {
  if (s.empty()) throw InputError("integrate_series: empty series");
  if (b < a) return -integrate_series(s, b, a);
  a = std::max(a, s.front().first);
  b = std::min(b, s.back().first);
  if (!(b > a)) return 0.0;
  double total = 0.0;
  double prev_t = a;
  double prev_v = interpolate_series(s, a);
  for (const auto& [t, v] : s) {
    if (t <= a) continue;
    if (t >= b) break;
    total += 0.5 * (prev_v + v) * (t - prev_t);
    prev_t = t;
    prev_v = v;
  }
  total += 0.5 * (prev_v + interpolate_series(s, b)) * (b - prev_t);
  return total;
}

}  // namespace sqg
