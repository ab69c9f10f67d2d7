#pragma once

#include <limits>
#include <string>

namespace sqg {

/// A constant standing in for one of the unnamed universal constants of the
/// a-priori estimates, with the time range it was fitted on.
struct FittedConstant {
  double value = std::numeric_limits<double>::quiet_NaN();
  double t_min = std::numeric_limits<double>::quiet_NaN();
  double t_max = std::numeric_limits<double>::quiet_NaN();
  bool fitted = false;  ///< false: configured default
  std::string source;

  bool known() const noexcept { return value == value; }
};

/// Fallback decay-rate constant when no data constrains c0: the decay rate
/// 2 pi of the slowest mode |k| = 1 on the unit torus.
double default_decay_constant() noexcept;

/// Constants and derived radii. Every constant is either fitted per check
/// (the smallest value for which the estimate holds on the data) or a
/// configured default; c3 defaults to 64 and may only be raised.
struct ConstantsLedger {
  double kappa = 1.0;
  double f_l2 = 0.0;
  double f_linf = 0.0;
  double f_h1 = 0.0;

  FittedConstant c0;        ///< decay rate in the L2 / Linf decay and energy estimates
  FittedConstant c_linf;    ///< prefactor of the Linf estimate for t >= 1
  FittedConstant c_holder;  ///< prefactor of the C^alpha bound for t >= t_alpha
  FittedConstant c1;        ///< B_alpha radius factor 4 c / c0, c refitted after entry into B_inf
  FittedConstant c2;        ///< nonlinear lower bound constant
  double c3 = 64.0;         ///< alpha = min(kappa / (c3 K_inf), 1/4)
  FittedConstant c4;        ///< gradient lower bound constant
  FittedConstant c_h1;      ///< constant inside K1
  FittedConstant c_h32;     ///< prefactor of the H^{3/2} time-integral bound
  FittedConstant c_r2;      ///< exponent constant in R2

  double theta0_linf = 0.0;
  double theta0_l2 = 0.0;
  double calpha_bound = std::numeric_limits<double>::quiet_NaN();  ///< measured sup ||theta||_{C^alpha}

  /// ||theta0||_Linf + ||f||_Linf / (c0 kappa).
  double k_inf() const;
  /// alpha_choice(k_inf(), kappa, c3).
  double alpha() const;
  /// alpha_choice(3 ||f||_Linf / (c0 kappa), kappa, c3): the exponent for data in B_inf
  /// (1/4 when f = 0).
  double ball_alpha() const;
  /// 2 ||f||_Linf / (c0 kappa).
  double b_inf_radius() const;
  /// c1 ||f||_Linf / kappa.
  double b_alpha_radius() const;
  /// 4/(c0 kappa) [ (c M / kappa)^{1/(4 alpha)} + 4 ||f||_{H1}^2 / (c0 kappa) ], at least 1.
  double k1() const;
  /// R1^2 = 2 K1 + (2 c1 ||f||_Linf / kappa)^2.
  double r1() const;
  /// R2^2 = (2 R1^2 + ||f||_{H1}^2 / kappa) exp(c R1^2 / kappa).
  double r2() const;

  /// Throws InputError unless every known constant is > 0 and c3 >= 64.
  void validate() const;
};

}  // namespace sqg
