#pragma once

#include "sqg/envelope.hpp"
#include "sqg/ledger.hpp"
#include "sqg/report.hpp"
#include "sqg/solver.hpp"

namespace sqg {

/// || theta(t) ||^2 + kappa int_0^t ||Lambda^{1/2} theta||^2
///     <= ||theta0||^2 + ||f||^2 t / (c0 kappa)
///
/// Reports the largest relative excess (LHS - RHS) / RHS over samples and
/// the exact discrete energy balance
///   ||theta||^2 + 2 kappa int ||Lambda^{1/2} theta||^2 - 2 int (f, theta) - ||theta0||^2.
CheckReport energy_inequality_check(const TrajectoryRecord& traj, double kappa, const SpectralField& forcing,
                                    double c0, double tolerance = 1e-3);

/// Largest c0 for which the energy inequality holds at every sample
/// (+inf when no sample constrains it).
double fit_energy_c0(const TrajectoryRecord& traj, double kappa, const SpectralField& forcing);

/// Largest c0 with value(t) <= value(0) e^{-c0 kappa t} + forcing_norm / (c0 kappa)
/// at every sample (+inf when unconstrained).
double fit_decay_c0(const Series& series, double kappa, double forcing_norm);

/// Fills c0 (minimum of the energy, L2-decay and Linf-decay fits) along
/// with the forcing norms and initial norms.
ConstantsLedger ledger_from_decay(const TrajectoryRecord& traj);

/// ||theta(t)||_Linf <= (c/kappa) [||theta0||_L2 + kappa^{-1/2} ||f||_L2] e^{-c0 kappa t}
///                      + ||f||_Linf / (c0 kappa),   t >= 1.
/// Reports the minimal c. Throws InputError if the trajectory ends before t = 1.
CheckReport linf_estimate_check(const TrajectoryRecord& traj, const ConstantsLedger& ledger);

/// Envelope of the L2 or Linf series with asymptote ||f|| / (c0 kappa).
CheckReport decay_envelope_check(const TrajectoryRecord& traj, const ConstantsLedger& ledger, const std::string& norm);

}  // namespace sqg
