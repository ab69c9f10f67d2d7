#include "sqg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sqg/error.hpp"
#include "sqg/norms.hpp"
#include "sqg/operators.hpp"

namespace sqg {
namespace {

double odd_component(const TorusGrid& g, int k) { return g.is_nyquist(k) ? 0.0 : static_cast<double>(k); }

bool all_finite(std::span<const Complex> v) {
  for (const auto& c : v) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      return false;
    }
  }
  return true;
}

}  // namespace

SolverConfig SolverConfig::make(double kappa, TorusGrid grid) {
  SolverConfig c;
  c.kappa = kappa;
  c.grid = grid;
  c.forcing = SpectralField(grid);
  return c;
}

void SolverConfig::validate() const {
  if (!(kappa >= 0.0 && kappa <= 1.0)) {
    throw ConfigError("kappa must lie in (0, 1] (or be 0 for the inviscid diagnostic mode)");
  }
  if (!(forcing.grid() == grid)) {
    throw ConfigError("forcing grid does not match the solver grid");
  }
  if (dt.kind == DtPolicy::Kind::Fixed && !(dt.dt > 0.0 && std::isfinite(dt.dt))) {
    throw ConfigError("fixed dt must be positive");
  }
  if (dt.kind == DtPolicy::Kind::Cfl) {
    if (!(dt.safety > 0.0 && dt.safety < 1.0)) {
      throw ConfigError("CFL safety factor must lie in (0, 1)");
    }
    if (!(dt.dt_max > 0.0)) {
      throw ConfigError("dt_max must be positive");
    }
  }
  if (!(blowup_factor > 1.0)) {
    throw ConfigError("blow-up factor must exceed 1");
  }
}

Integrator::Integrator(const SolverConfig& config) : config_(config) {
  config_.validate();
  const TorusGrid& g = config_.grid;
  const std::size_t size = g.size();
  rate_.resize(size);
  keep_.resize(size);
  for (auto* v : {&riesz1_, &riesz2_, &deriv1_, &deriv2_}) {
    v->assign(size, 0.0);
  }
  const int cut = g.dealias_cutoff();
  for (int i1 = 0; i1 < g.n(); ++i1) {
    const int k1 = g.wavenumber(i1);
    for (int i2 = 0; i2 < g.n(); ++i2) {
      const int k2 = g.wavenumber(i2);
      const std::size_t idx = g.flat(i1, i2);
      const double mag = std::hypot(k1, k2);
      rate_[idx] = config_.kappa * kTwoPi * mag;
      keep_[idx] = (!config_.dealias || (std::abs(k1) <= cut && std::abs(k2) <= cut)) ? 1 : 0;
      const double o1 = odd_component(g, k1);
      const double o2 = odd_component(g, k2);
      riesz1_[idx] = idx == 0 ? 0.0 : -o2 / mag;
      riesz2_[idx] = idx == 0 ? 0.0 : o1 / mag;
      deriv1_[idx] = kTwoPi * o1;
      deriv2_[idx] = kTwoPi * o2;
    }
  }
  for (auto* v : {&work_a_, &work_b_, &work_c_, &work_d_, &theta_, &n0_, &n1_, &stage_}) {
    v->assign(size, Complex{});
  }
  for (auto* v : {&phys_u1_, &phys_u2_, &phys_g1_, &phys_g2_, &phys_prod_}) {
    v->assign(size, 0.0);
  }
}

void Integrator::tendency(std::span<const Complex> theta, std::span<Complex> out, bool with_forcing) {
  const std::size_t size = theta.size();
  for (std::size_t i = 0; i < size; ++i) {
    const Complex c = keep_[i] ? theta[i] : Complex{};
    const Complex ic(-c.imag(), c.real());  // i * c
    work_a_[i] = riesz1_[i] * ic;
    work_b_[i] = riesz2_[i] * ic;
    work_c_[i] = deriv1_[i] * ic;
    work_d_[i] = deriv2_[i] * ic;
  }
  FftPlan& plan = plan_for(config_.grid.n());
  plan.inverse(work_a_, phys_u1_);
  plan.inverse(work_b_, phys_u2_);
  plan.inverse(work_c_, phys_g1_);
  plan.inverse(work_d_, phys_g2_);
  for (std::size_t i = 0; i < phys_prod_.size(); ++i) {
    phys_prod_[i] = -(phys_u1_[i] * phys_g1_[i] + phys_u2_[i] * phys_g2_[i]);
  }
  plan.forward(phys_prod_, out);
  out[0] = Complex{};
  auto f = config_.forcing.coefficients();
  for (std::size_t i = 1; i < size; ++i) {
    if (!keep_[i]) {
      out[i] = Complex{};
    }
    if (with_forcing) {
      out[i] += f[i];
    }
  }
}

void Integrator::apply_decay(std::span<Complex> v, double dt) {
  if (dt != decay_dt_) {
    decay_cache_.resize(rate_.size());
    for (std::size_t i = 0; i < rate_.size(); ++i) {
      decay_cache_[i] = std::exp(-rate_[i] * dt);
    }
    decay_dt_ = dt;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] *= decay_cache_[i];
  }
}

SpectralField Integrator::transport(const SpectralField& theta) {
  if (!(theta.grid() == config_.grid)) {
    throw InputError("transport: field grid does not match the integrator");
  }
  std::vector<Complex> out(config_.grid.size());
  tendency(theta.coefficients(), out, false);
  return SpectralField::adopt(config_.grid, std::move(out));
}

void Integrator::advance(SolverState& state, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InputError("step size must be positive and finite");
  }
  if (!(state.theta.grid() == config_.grid)) {
    throw InputError("state grid does not match the integrator");
  }
  auto in = state.theta.coefficients();
  std::vector<Complex>& theta = theta_;
  std::copy(in.begin(), in.end(), theta.begin());
  const std::size_t size = theta.size();
  tendency(theta, n0_);

  if (config_.scheme == TimeScheme::IntegratingFactorRK2) {
    // Heun under the integrating factor E = exp(-kappa Lambda dt):
    //   a = E (theta + dt N(theta)),  theta' = E (theta + dt/2 N(theta)) + dt/2 N(a)
    for (std::size_t i = 0; i < size; ++i) {
      stage_[i] = theta[i] + dt * n0_[i];
    }
    apply_decay(stage_, dt);
    tendency(stage_, n1_);
    for (std::size_t i = 0; i < size; ++i) {
      theta[i] += 0.5 * dt * n0_[i];
    }
    apply_decay(theta, dt);
    for (std::size_t i = 0; i < size; ++i) {
      theta[i] += 0.5 * dt * n1_[i];
    }
  } else {
    for (std::size_t i = 0; i < size; ++i) {
      theta[i] = (theta[i] + dt * n0_[i]) / (1.0 + rate_[i] * dt);
    }
  }
  theta[0] = Complex{};
  if (!all_finite(theta)) {
    std::ostringstream msg;
    msg << "non-finite state after step " << state.step + 1 << " at t = " << state.t + dt;
    throw SolverAbort(msg.str());
  }
  state.theta = SpectralField::adopt(config_.grid, theta);
  state.t += dt;
  ++state.step;
}

SpectralField nonlinear_term(const SpectralField& theta, bool dealias) {
  SolverConfig c = SolverConfig::make(0.0, theta.grid());
  c.dealias = dealias;
  Integrator integ(c);
  return integ.transport(theta);
}

SolverState step(const SolverConfig& config, const SolverState& state, double dt) {
  Integrator integ(config);
  SolverState next = state;
  integ.advance(next, dt);
  return next;
}

double cfl_dt(const SolverState& state, const SolverConfig& config) {
  auto [u1, u2] = riesz_velocity(state.theta);
  const auto a = u1.samples();
  const auto b = u2.samples();
  double umax = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    umax = std::max(umax, std::hypot(a[i], b[i]));
  }
  const double dx = 1.0 / config.grid.n();
  return std::min(config.dt.dt_max, config.dt.safety * dx / std::max(umax, 1e-8));
}

TrajectorySample measure(const SolverState& state) {
  TrajectorySample s;
  s.t = state.t;
  s.step = state.step;
  s.l2 = hs_norm(state.theta, 0.0);
  s.linf = linf_norm(state.theta);
  s.h1 = hs_norm(state.theta, 1.0);
  s.h32 = hs_norm(state.theta, 1.5);
  s.half_sq = hs_norm_squared(state.theta, 0.5);
  return s;
}

std::vector<std::pair<double, double>> TrajectoryRecord::series(const std::string& name) const {
  double TrajectorySample::*member = nullptr;
  if (name == "l2") member = &TrajectorySample::l2;
  else if (name == "linf") member = &TrajectorySample::linf;
  else if (name == "h1") member = &TrajectorySample::h1;
  else if (name == "h32") member = &TrajectorySample::h32;
  else if (name == "half_sq") member = &TrajectorySample::half_sq;
  else if (name == "int_half_sq") member = &TrajectorySample::int_half_sq;
  else if (name == "int_h32_sq") member = &TrajectorySample::int_h32_sq;
  else if (name == "int_work") member = &TrajectorySample::int_work;
  else throw InputError("unknown trajectory series '" + name + "'");
  std::vector<std::pair<double, double>> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    out.emplace_back(s.t, s.*member);
  }
  return out;
}

TrajectoryRecord evolve_from(const SolverConfig& config, SolverState& state, double duration,
                             const EvolveOptions& options, const std::vector<Observer>& observers) {
  if (!(duration > 0.0)) {
    throw InputError("evolve: final time must be positive");
  }
  if (!(options.sample_interval > 0.0)) {
    throw InputError("evolve: sample interval must be positive");
  }
  if (options.snapshot_stride < 1) {
    throw InputError("evolve: snapshot stride must be >= 1");
  }
  Integrator integ(config);
  TrajectoryRecord rec;
  rec.kappa = config.kappa;
  rec.forcing = config.forcing;

  const double t0 = state.t;
  const double t_end = t0 + duration;
  const double guard = config.blowup_factor *
                       std::max(linf_norm(state.theta), linf_norm(config.forcing) * (1.0 + duration));

  // Per-mode weights for the running dissipation integrals.
  const TorusGrid& g = config.grid;
  std::vector<double> w_half(g.size()), w_h32(g.size());
  for (int i1 = 0; i1 < g.n(); ++i1) {
    for (int i2 = 0; i2 < g.n(); ++i2) {
      const double k = kTwoPi * std::hypot(g.wavenumber(i1), g.wavenumber(i2));
      w_half[g.flat(i1, i2)] = k;
      w_h32[g.flat(i1, i2)] = k * k * k;
    }
  }
  auto weighted = [](const std::vector<double>& energy, const std::vector<double>& w) {
    double acc = 0.0;
    for (std::size_t i = 0; i < energy.size(); ++i) {
      acc += w[i] * energy[i];
    }
    return acc;
  };
  auto mode_energy = [](const SpectralField& f, std::vector<double>& out) {
    auto c = f.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) {
      out[i] = std::norm(c[i]);
    }
  };
  // Step integral of each |c_k|^2, exact when the mode decays exponentially.
  auto log_mean = [](double a, double b) {
    if (a <= 0.0 || b <= 0.0) {
      return 0.5 * (a + b);
    }
    const double r = b / a;
    if (std::abs(r - 1.0) < 1e-4) {
      const double x = r - 1.0;
      return a * (1.0 + x / 2.0 - x * x / 12.0 + x * x * x / 24.0);
    }
    return (b - a) / std::log(r);
  };
  std::vector<double> prev_energy(g.size()), cur_energy(g.size()), step_energy(g.size());

  const bool has_forcing = !config.forcing.is_zero();
  auto work = [&config](const SpectralField& f) {
    double acc = 0.0;
    auto a = config.forcing.coefficients();
    auto b = f.coefficients();
    for (std::size_t i = 0; i < a.size(); ++i) {
      acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    }
    return acc;
  };

  double int_half = 0.0;
  double int_h32 = 0.0;
  double int_work = 0.0;
  mode_energy(state.theta, prev_energy);
  double prev_work = work(state.theta);
  std::size_t sample_index = 0;

  auto record_sample = [&](const SolverState& s) {
    TrajectorySample m = measure(s);
    m.int_half_sq = int_half;
    m.int_h32_sq = int_h32;
    m.int_work = int_work;
    if (!(m.linf <= guard) && guard > 0.0) {
      std::ostringstream msg;
      msg << "blow-up guard: ||theta||_Linf = " << m.linf << " at t = " << s.t << " exceeds " << guard;
      throw SolverAbort(msg.str());
    }
    rec.samples.push_back(m);
    const bool dense = s.t - t0 <= options.dense_until + 1e-12;
    if (options.keep_snapshots && (dense || sample_index % static_cast<std::size_t>(options.snapshot_stride) == 0)) {
      rec.snapshots.push_back(s);
    }
    ++sample_index;
    for (const auto& obs : observers) {
      try {
        obs(s);
      } catch (const std::exception& e) {
        rec.observer_errors.push_back("t=" + std::to_string(s.t) + ": " + e.what());
      }
    }
  };

  record_sample(state);
  std::uint64_t j = 1;
  double target = std::min(t0 + options.sample_interval, t_end);
  for (;;) {
    double dt = config.dt.kind == DtPolicy::Kind::Fixed ? config.dt.dt : cfl_dt(state, config);
    const double remaining = target - state.t;
    bool hits = false;
    if (remaining <= dt * (1.0 + 1e-9)) {
      hits = true;
      if (remaining < dt * (1.0 - 1e-9)) {
        dt = remaining;
      }
    }
    integ.advance(state, dt);
    mode_energy(state.theta, cur_energy);
    for (std::size_t i = 0; i < cur_energy.size(); ++i) {
      step_energy[i] = log_mean(prev_energy[i], cur_energy[i]);
    }
    int_half += dt * weighted(step_energy, w_half);
    int_h32 += dt * weighted(step_energy, w_h32);
    prev_energy.swap(cur_energy);
    if (has_forcing) {
      const double cur_work = work(state.theta);
      int_work += 0.5 * dt * (prev_work + cur_work);
      prev_work = cur_work;
    }
    if (!hits) {
      continue;
    }
    state.t = target;
    record_sample(state);
    if (target >= t_end) {
      break;
    }
    ++j;
    target = std::min(t0 + static_cast<double>(j) * options.sample_interval, t_end);
    if (t_end - target < 1e-12 * std::max(1.0, t_end)) {
      target = t_end;
    }
  }
  return rec;
}

TrajectoryRecord evolve(const SolverConfig& config, const SpectralField& theta0, double T,
                        const EvolveOptions& options, const std::vector<Observer>& observers) {
  SolverState s{theta0, 0.0, 0};
  return evolve_from(config, s, T, options, observers);
}

}  // namespace sqg
