#pragma once

#include "sqg/envelope.hpp"
#include "sqg/ledger.hpp"
#include "sqg/report.hpp"
#include "sqg/solver.hpp"

namespace sqg {

/// ||theta(t)||_{H1}^2 <= ||theta0||_{H1}^2 e^{-c0 kappa t / 4} + K1 and
/// int_t^{t+1} ||theta||_{H^{3/2}}^2 <= (c / kappa)[||theta0||_{H1}^2 + K1].
///
/// K1 is the smallest value (at least 1) making the first bound hold; the
/// constant inside K1 is recovered by inverting its closed form with the
/// ledger's alpha and C^alpha bound. Fills ledger.c_h1 and ledger.c_h32.
CheckReport h1_envelope_check(const TrajectoryRecord& traj, ConstantsLedger& ledger);

/// Largest ratio sup_{t >= 1} ||theta||_{H^{3/2}}^2 / (2 R1^2 + ||f||_{H1}^2 / kappa),
/// expressed as the exponent constant c of R2. Fills ledger.c_r2.
double fit_r2_constant(const TrajectoryRecord& traj, ConstantsLedger& ledger);

/// c1 = 4 c / c0 with c = sup ||theta(t)||_{C^alpha} / (||theta(t_B)||_Linf + ||f||_Linf / (c0 kappa))
/// over t >= t_B + t_alpha, t_B the entry time into B_inf and alpha = ledger.ball_alpha().
/// Without entry the whole trajectory is used. Fills ledger.c1.
double fit_c1(const TrajectoryRecord& traj, ConstantsLedger& ledger, const Series* seminorms = nullptr);

enum class Ball { Linf, Calpha, H1, H32 };

Ball parse_ball(const std::string& name);
const char* to_string(Ball b) noexcept;

/// Radius of the named absorbing ball from the ledger formulas.
double ball_radius(const ConstantsLedger& ledger, Ball ball);

/// Entry of the matching norm series into the named ball. The C^alpha and H1
/// balls use the L-infinity norm plus the seminorm of exponent
/// ledger.ball_alpha() over stored snapshots.
CheckReport absorbing_check(const TrajectoryRecord& traj, const ConstantsLedger& ledger, Ball ball,
                            const Series* seminorms = nullptr);

/// Series of the norm that the named ball measures.
Series ball_series(const TrajectoryRecord& traj, const ConstantsLedger& ledger, Ball ball,
                   const Series* seminorms = nullptr);

}  // namespace sqg
