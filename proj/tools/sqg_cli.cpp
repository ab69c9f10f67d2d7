// sqg: run SQG scenarios and inspect their trajectories.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <thread>

#include "sqg/checkpoint.hpp"
#include "sqg/error.hpp"
#include "sqg/experiment.hpp"
#include "sqg/norms.hpp"

using namespace sqg;

namespace {

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const auto comma = item.find(',', start);
      const std::string part = item.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!part.empty()) out.push_back(part);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

double parse_auto(const std::string& text, const char* flag) {
  if (text == "auto") return 0.0;
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos == text.size() && v > 0.0) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(std::string(flag) + " must be 'auto' or a positive number");
}

void print_reports(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports) std::cout << r.to_record() << '\n';
}

int cmd_run(const std::vector<std::string>& specs, const std::string& root, int jobs, int threads) {
  std::vector<ScenarioSpec> parsed;
  for (const auto& path : specs) parsed.push_back(load_scenario(path));
  std::vector<int> codes(parsed.size(), 0);
  std::mutex io;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < parsed.size(); i = next++) {
      int code = kExitPass;
      std::string summary;
      try {
        const RunManifest m = run_experiment(parsed[i], RunOptions{root, threads});
        code = m.exit_code;
        summary = "scenario=" + m.scenario + " status=" + m.status + " dir=" + m.directory.string();
        for (const auto& r : m.reports) summary += "\n  " + r.to_record();
        if (!m.error.empty()) summary += "\n  error: " + m.error;
      } catch (const ConfigError& e) {
        code = kExitConfigError;
        summary = "scenario=" + parsed[i].name + " config error: " + e.what();
      } catch (const SolverAbort& e) {
        code = kExitSolverAbort;
        summary = "scenario=" + parsed[i].name + " solver abort: " + e.what();
      }
      std::lock_guard<std::mutex> lock(io);
      std::cout << summary << std::endl;
      codes[i] = code;
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(parsed.size())));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return codes.empty() ? kExitPass : *std::max_element(codes.begin(), codes.end());
}


}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forced critical SQG simulator and a-priori estimate diagnostics"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker threads for diagnostics")->check(CLI::PositiveNumber);

  auto* run = app.add_subcommand("run", "run scenario files");
  std::vector<std::string> specs;
  std::string root;
  int jobs = 1;
  run->add_option("spec", specs, "scenario files")->required()->check(CLI::ExistingFile);
  run->add_option("--output-root", root, "output root (default: $SQG_OUTPUT_ROOT or .)");
  run->add_option("--jobs", jobs, "scenarios run in parallel")->check(CLI::PositiveNumber);

  auto* diagnose = app.add_subcommand("diagnose", "run checks on a stored trajectory");
  std::string dir;
  std::vector<std::string> checks;
  diagnose->add_option("dir", dir, "run directory")->required()->check(CLI::ExistingDirectory);
  diagnose->add_option("--checks", checks, "comma-separated check names")->required();

  auto* degiorgi = app.add_subcommand("degiorgi", "truncation ladder on a stored trajectory");
  std::string M_text = "auto";
  double t0 = 0.5;
  int k_max = 10;
  degiorgi->add_option("dir", dir, "run directory")->required()->check(CLI::ExistingDirectory);
  degiorgi->add_option("--M", M_text, "truncation amplitude or 'auto'");
  degiorgi->add_option("--t0", t0, "time cutoff scale in (0, 1]");
  degiorgi->add_option("--kmax", k_max, "ladder depth");

  auto* holder = app.add_subcommand("holder", "Holder quotient diagnostics on a stored trajectory");
  std::string alpha_text = "auto";
  double xi0 = 1.0;
  holder->add_option("dir", dir, "run directory")->required()->check(CLI::ExistingDirectory);
  holder->add_option("--alpha", alpha_text, "Holder exponent or 'auto'");
  holder->add_option("--xi0", xi0, "initial xi");

  auto* absorb = app.add_subcommand("absorb", "entry time into an absorbing ball");
  std::string ball = "linf";
  absorb->add_option("dir", dir, "run directory")->required()->check(CLI::ExistingDirectory);
  absorb->add_option("--ball", ball, "linf, calpha, h1 or h32")->check(CLI::IsMember({"linf", "calpha", "h1", "h32"}));

  auto* compare = app.add_subcommand("compare", "H1 growth of the difference of two solutions");
  std::string ck_a, ck_b, forcing_path;
  double T = 1.0, dt = 1e-3, interval = 0.01;
  compare->add_option("a", ck_a, "checkpoint")->required()->check(CLI::ExistingFile);
  compare->add_option("b", ck_b, "checkpoint")->required()->check(CLI::ExistingFile);
  compare->add_option("--T", T, "final time")->required();
  compare->add_option("--forcing", forcing_path, "forcing checkpoint (default: zero)")->check(CLI::ExistingFile);
  compare->add_option("--dt", dt, "time step");
  compare->add_option("--sample-interval", interval, "ratio sampling interval");

  auto* envelope = app.add_subcommand("envelope", "fit a decay envelope to a t,value CSV");
  std::string csv;
  double asymptote = 0.0;
  envelope->add_option("csv", csv, "series file")->required()->check(CLI::ExistingFile);
  envelope->add_option("--asymptote", asymptote, "additive floor")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfigError;
  }

  try {
    if (*run) return cmd_run(specs, root, jobs, threads);

    if (*diagnose) {
      const auto traj = load_trajectory(dir);
      CheckOptions co;
      co.threads = threads;
      const CheckRun r = run_checks(traj, split_list(checks), co);
      print_reports(r.reports);
      return r.passed() ? kExitPass : kExitCheckFail;
    }

    if (*degiorgi) {
      const auto traj = load_trajectory(dir);
      double M = parse_auto(M_text, "--M");
      if (M == 0.0) M = degiorgi_auto_level(traj, t0).M;
      const DeGiorgiLadder L = degiorgi_ladder(traj, M, t0, k_max);
      std::printf("k,eta,tau,Q,ratio,audit_rhs\n");
      for (int k = 0; k <= L.k_max; ++k)
        std::printf("%d,%s,%s,%s,%s,%s\n", k, format_double(L.eta[k]).c_str(), format_double(L.tau[k]).c_str(),
                    format_double(L.Q[k]).c_str(), k ? format_double(L.ratio[k - 1]).c_str() : "",
                    k ? format_double(L.audit_rhs[k - 1]).c_str() : "");
      const CheckReport rep = degiorgi_check(L);
      std::cout << rep.to_record() << '\n';
      return L.converged ? kExitPass : kExitCheckFail;
    }

    if (*holder) {
      const auto traj = load_trajectory(dir);
      const ConstantsLedger L = ledger_from_decay(traj);
      double alpha = parse_auto(alpha_text, "--alpha");
      if (alpha == 0.0) alpha = L.alpha();
      std::printf("alpha=%s t_alpha=%s K_inf=%s ode_residual=%s\n", format_double(alpha).c_str(),
                  format_double(t_alpha(alpha, xi0)).c_str(), format_double(L.k_inf()).c_str(),
                  format_double(xi_ode_residual(alpha, xi0)).c_str());
      const auto psi = psi_series(traj, alpha, xi0, 0.25, 4096, threads);
      std::printf("t,xi,psi\n");
      const double ts = traj.snapshots.empty() ? 0.0 : traj.snapshots.front().t;
      for (const auto& [t, v] : psi)
        std::printf("%s,%s,%s\n", format_double(t).c_str(), format_double(xi_profile(t - ts, alpha, xi0)).c_str(),
                    format_double(v).c_str());
      const CheckReport b = holder_bound_check(traj, L, alpha);
      const CheckReport p = psi_check(traj, L, alpha, xi0, threads);
      std::cout << b.to_record() << '\n' << p.to_record() << '\n';
      return b.passed() && p.passed() ? kExitPass : kExitCheckFail;
    }

    if (*absorb) {
      const auto traj = load_trajectory(dir);
      const std::string check = "absorb_" + ball;
      CheckOptions co;
      co.threads = threads;
      const CheckRun r = run_checks(traj, {check}, co);
      const CheckReport& rep = r.reports.front();
      if (rep.status == CheckStatus::Fail && rep.note == "not entered") {
        std::cout << "not entered (radius " << format_double(rep.value("radius")) << ")\n";
      } else if (rep.status == CheckStatus::Pass) {
        std::cout << "entered t_B=" << format_double(rep.fitted) << " radius=" << format_double(rep.value("radius"))
                  << '\n';
      }
      std::cout << rep.to_record() << '\n';
      return rep.passed() ? kExitPass : kExitCheckFail;
    }

    if (*compare) {
      const Checkpoint a = read_checkpoint(ck_a);
      const Checkpoint b = read_checkpoint(ck_b);
      if (!(a.state.theta.grid() == b.state.theta.grid())) throw ConfigError("checkpoints live on different grids");
      SolverConfig cfg = SolverConfig::make(a.kappa, a.state.theta.grid());
      if (!forcing_path.empty()) cfg.forcing = regrid(read_checkpoint(forcing_path).state.theta, cfg.grid);
      cfg.dt.dt = dt;
      cfg.validate();
      const ContinuityResult res = continuity_probe(cfg, a.state.theta, b.state.theta, T, interval);
      std::printf("ratio_max=%s Lambda_L=%s final_ratio=%s\n", format_double(res.max_ratio).c_str(),
                  format_double(res.growth_rate).c_str(), format_double(res.ratio.back().second).c_str());
      const CheckReport rep = res.report();
      std::cout << rep.to_record() << '\n';
      return rep.passed() ? kExitPass : kExitCheckFail;
    }

    if (*envelope) {
      const Series s = read_series_csv(csv);
      const EnvelopeFit fit = fit_decay_envelope(s, asymptote);
      std::printf("lambda=%s A=%s asymptote=%s max_violation=%s%s\n", format_double(fit.rate).c_str(),
                  format_double(fit.prefactor).c_str(), format_double(fit.asymptote).c_str(),
                  format_double(fit.max_violation).c_str(), fit.below_asymptote ? " (below asymptote)" : "");
      return kExitPass;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const SolverAbort& e) {
    std::cerr << "solver abort: " << e.what() << '\n';
    return kExitSolverAbort;
  }
  return kExitPass;
}
