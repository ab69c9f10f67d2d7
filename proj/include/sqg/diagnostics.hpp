#pragma once

#include <string>
#include <vector>

#include "sqg/continuity.hpp"
#include "sqg/degiorgi.hpp"
#include "sqg/envelope.hpp"
#include "sqg/estimates.hpp"
#include "sqg/holder.hpp"
#include "sqg/ledger.hpp"
#include "sqg/regularity.hpp"
#include "sqg/report.hpp"

namespace sqg {

/// Names accepted by run_checks.
const std::vector<std::string>& known_checks();

struct CheckOptions {
  double energy_tolerance = 1e-3;
  double conservation_tolerance = 1e-6;
  double degiorgi_t0 = 0.5;
  int degiorgi_k_max = 10;
  double degiorgi_M = 0.0;  ///< 0: automatic threshold
  double alpha = 0.0;       ///< 0: alpha_choice with the measured K_inf
  double xi0 = 1.0;
  double c3 = 64.0;
  int threads = 1;
};

struct CheckRun {
  ConstantsLedger ledger;
  std::vector<CheckReport> reports;

  bool passed() const;
};

/// Fits the ledger from the trajectory and runs the named checks, fanning
/// them out over `threads` workers. Reports come back sorted by name.
/// Throws InputError on an unknown check name.
CheckRun run_checks(const TrajectoryRecord& traj, const std::vector<std::string>& checks,
                    const CheckOptions& options = {});

}  // namespace sqg
