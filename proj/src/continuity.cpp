#include "sqg/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sqg/error.hpp"
#include "sqg/norms.hpp"

namespace sqg {

ContinuityResult continuity_probe(const SolverConfig& config, const SpectralField& theta_a,
                                  const SpectralField& theta_b, double T, double sample_interval) {
  if (!(theta_a.grid() == config.grid) || !(theta_b.grid() == config.grid))
    throw InputError("continuity_probe: data must live on the solver grid");
  ContinuityResult out;
  out.initial_distance = hs_norm(theta_a - theta_b, 1.0);
  out.identical = out.initial_distance == 0.0;
  EvolveOptions opt;
  opt.sample_interval = sample_interval;
  opt.keep_snapshots = true;
  if (out.identical) {
    const TrajectoryRecord ra = evolve(config, theta_a, T, opt);
    for (const auto& s : ra.snapshots) out.ratio.emplace_back(s.t, 1.0);
    return out;
  }
  const TrajectoryRecord ra = evolve(config, theta_a, T, opt);
  const TrajectoryRecord rb = evolve(config, theta_b, T, opt);
  out.max_ratio = 0.0;
  out.growth_rate = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ra.snapshots.size(); ++i) {
    const double t = ra.snapshots[i].t;
    const double r = hs_norm(ra.snapshots[i].theta - rb.snapshots[i].theta, 1.0) / out.initial_distance;
    out.ratio.emplace_back(t, r);
    out.max_ratio = std::max(out.max_ratio, r);
    if (t > 0.0) out.growth_rate = std::max(out.growth_rate, std::log(r) / t);
  }
  if (!std::isfinite(out.growth_rate)) out.growth_rate = 0.0;
  return out;
}

CheckReport ContinuityResult::report() const {
  CheckReport r;
  r.name = "continuity";
  r.fitted_name = "Lambda_L";
  r.fitted = growth_rate;
  r.tolerance = 0.0;
  if (!ratio.empty()) {
    r.t_min = ratio.front().first;
    r.t_max = ratio.back().first;
  }
  r.values.emplace_back("max_ratio", max_ratio);
  r.values.emplace_back("initial_distance", initial_distance);
  r.values.emplace_back("final_ratio", ratio.empty() ? 1.0 : ratio.back().second);
  bool bounded = std::isfinite(growth_rate);
  for (const auto& [t, v] : ratio)
    if (!(v <= std::exp(growth_rate * t) * (1.0 + 1e-12))) bounded = false;
  r.status = bounded ? CheckStatus::Pass : CheckStatus::Fail;
  if (identical) r.note = "identical data";
  return r;
}

}  // namespace sqg
