#pragma once

#include "sqg/envelope.hpp"
#include "sqg/report.hpp"
#include "sqg/solver.hpp"

namespace sqg {

struct ContinuityResult {
  Series ratio;            ///< ||S(t)a - S(t)b||_{H1} / ||a - b||_{H1}
  double max_ratio = 1.0;
  double growth_rate = 0.0;  ///< Lambda_L = max over t > 0 of ln(ratio) / t
  double initial_distance = 0.0;
  bool identical = false;

  CheckReport report() const;
};

/// Evolves both data with the same config and tracks their H1 distance.
/// Identical inputs give ratio 1 at every sample.
ContinuityResult continuity_probe(const SolverConfig& config, const SpectralField& theta_a,
                                  const SpectralField& theta_b, double T, double sample_interval = 0.01);

}  // namespace sqg
