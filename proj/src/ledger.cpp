#include "sqg/ledger.hpp"

#include <algorithm>
#include <cmath>

#include "sqg/error.hpp"
#include "sqg/grid.hpp"
#include "sqg/holder.hpp"

namespace sqg {

double default_decay_constant() noexcept { return kTwoPi; }

namespace {

double require(const FittedConstant& c, const char* name) {
  if (!c.known()) throw InputError(std::string("constants ledger: ") + name + " is not set");
  return c.value;
}

}  // namespace

double ConstantsLedger::k_inf() const { return theta0_linf + f_linf / (require(c0, "c0") * kappa); }

double ConstantsLedger::alpha() const { return alpha_choice(k_inf(), kappa, c3); }

double ConstantsLedger::ball_alpha() const {
  const double k = 3.0 * f_linf / (require(c0, "c0") * kappa);
  return k > 0.0 ? alpha_choice(k, kappa, c3) : 0.25;
}

double ConstantsLedger::b_inf_radius() const { return 2.0 * f_linf / (require(c0, "c0") * kappa); }

double ConstantsLedger::b_alpha_radius() const { return require(c1, "c1") * f_linf / kappa; }

double ConstantsLedger::k1() const {
  const double c0v = require(c0, "c0");
  const double a = alpha();
  const double M = calpha_bound;
  if (!std::isfinite(M)) throw InputError("constants ledger: C^alpha bound is not set");
  const double inner = std::pow(require(c_h1, "c_h1") * M / kappa, 1.0 / (4.0 * a));
  const double k = 4.0 / (c0v * kappa) * (inner + 4.0 * f_h1 * f_h1 / (c0v * kappa));
  return std::max(1.0, k);
}

double ConstantsLedger::r1() const {
  const double b = 2.0 * require(c1, "c1") * f_linf / kappa;
  return std::sqrt(2.0 * k1() + b * b);
}

double ConstantsLedger::r2() const {
  const double r1v = r1();
  const double c = require(c_r2, "c_r2");
  return std::sqrt((2.0 * r1v * r1v + f_h1 * f_h1 / kappa) * std::exp(c * r1v * r1v / kappa));
}

void ConstantsLedger::validate() const {
  if (!(kappa > 0.0)) throw InputError("constants ledger: kappa must be positive");
  if (!(c3 >= 64.0)) throw InputError("constants ledger: c3 must be >= 64");
  const std::pair<const FittedConstant*, const char*> all[] = {
      {&c0, "c0"}, {&c_linf, "c_linf"}, {&c_holder, "c_holder"}, {&c1, "c1"}, {&c2, "c2"},
      {&c4, "c4"}, {&c_h1, "c_h1"},     {&c_h32, "c_h32"},       {&c_r2, "c_r2"}};
  for (const auto& [c, name] : all)
    if (c->known() && !(c->value > 0.0)) throw InputError(std::string("constants ledger: ") + name + " must be positive");
}

}  // namespace sqg
