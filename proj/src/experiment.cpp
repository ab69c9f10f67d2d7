#include "sqg/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sqg/checkpoint.hpp"
#include "sqg/error.hpp"

#ifndef SQG_VERSION
#define SQG_VERSION "0.0.0"
#endif

namespace sqg {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

const char* kColumns[] = {"l2", "linf", "h1", "h32", "half_sq", "int_half_sq", "int_h32_sq", "int_work"};

void write_trajectory_csv(const fs::path& path, const std::vector<TrajectorySample>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << "t,step";
  for (const char* c : kColumns) out << ',' << c;
  out << '\n';
  for (const auto& s : samples) {
    out << format_double(s.t) << ',' << s.step;
    for (double v : {s.l2, s.linf, s.h1, s.h32, s.half_sq, s.int_half_sq, s.int_h32_sq, s.int_work})
      out << ',' << format_double(v);
    out << '\n';
  }
}

nlohmann::json constant_json(const FittedConstant& c) {
  nlohmann::json j;
  j["value"] = c.known() ? nlohmann::json(c.value) : nlohmann::json(nullptr);
  j["fitted"] = c.fitted;
  j["t_min"] = std::isfinite(c.t_min) ? nlohmann::json(c.t_min) : nlohmann::json(nullptr);
  j["t_max"] = std::isfinite(c.t_max) ? nlohmann::json(c.t_max) : nlohmann::json(nullptr);
  j["source"] = c.source;
  return j;
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["spec_hash"] = spec_hash;
  j["code_version"] = code_version;
  j["started"] = started;
  j["finished"] = finished;
  j["status"] = status;
  j["exit_code"] = exit_code;
  if (!error.empty()) j["error"] = error;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json c;
    c["name"] = r.name;
    c["status"] = to_string(r.status);
    if (!r.fitted_name.empty()) c[r.fitted_name] = number_or_null(r.fitted);
    c["tolerance"] = number_or_null(r.tolerance);
    c["range"] = {number_or_null(r.t_min), number_or_null(r.t_max)};
    for (const auto& [k, v] : r.values) c["values"][k] = number_or_null(v);
    if (!r.note.empty()) c["note"] = r.note;
    checks.push_back(c);
  }
  j["checks"] = checks;
  nlohmann::json L;
  L["kappa"] = ledger.kappa;
  L["c3"] = ledger.c3;
  L["c0"] = constant_json(ledger.c0);
  L["c_linf"] = constant_json(ledger.c_linf);
  L["c_holder"] = constant_json(ledger.c_holder);
  L["c1"] = constant_json(ledger.c1);
  L["c2"] = constant_json(ledger.c2);
  L["c4"] = constant_json(ledger.c4);
  L["c_h1"] = constant_json(ledger.c_h1);
  L["c_h32"] = constant_json(ledger.c_h32);
  L["c_r2"] = constant_json(ledger.c_r2);
  auto derived = [&](auto fn) -> nlohmann::json {
    try {
      return number_or_null(fn());
    } catch (const std::exception&) {
      return nullptr;
    }
  };
  L["K_inf"] = derived([&] { return ledger.k_inf(); });
  L["B_inf_radius"] = derived([&] { return ledger.b_inf_radius(); });
  L["B_alpha_radius"] = derived([&] { return ledger.b_alpha_radius(); });
  L["K1"] = derived([&] { return ledger.k1(); });
  L["R1"] = derived([&] { return ledger.r1(); });
  L["R2"] = derived([&] { return ledger.r2(); });
  j["ledger"] = L;
  j["artifacts"] = artifacts;
  return j.dump(2) + "\n";
}

fs::path resolve_output_root(const fs::path& requested) {
  if (!requested.empty()) return requested;
  if (const char* env = std::getenv("SQG_OUTPUT_ROOT"); env && *env) return env;
  return ".";
}

void write_series_csv(const fs::path& path, const Series& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << "t,value\n";
  for (const auto& [t, v] : series) out << format_double(t) << ',' << format_double(v) << '\n';
}

Series read_series_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  Series out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected 't,value'");
    try {
      std::size_t p1 = 0, p2 = 0;
      const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
      const double t = std::stod(a, &p1);
      const double v = std::stod(b, &p2);
      if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument("trailing");
      out.emplace_back(t, v);
    } catch (const std::exception&) {
      if (lineno == 1) continue;  // header
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": malformed row");
    }
  }
  return out;
}

RunManifest run_experiment(const ScenarioSpec& spec, const RunOptions& options) {
  RunManifest m;
  m.scenario = spec.name;
  m.spec_hash = spec.hash();
  m.code_version = SQG_VERSION;
  m.started = utc_now();
  const fs::path dir = resolve_output_root(options.output_root) / spec.directory;
  m.directory = dir;
  fs::create_directories(dir / "series");
  write_text(dir / "spec.cfg", spec.source);
  m.artifacts.push_back("spec.cfg");

  const SolverConfig config = spec.solver_config();
  const SpectralField theta0 = spec.initial_field();
  write_checkpoint(dir / "forcing.ckpt", SolverState{config.forcing, 0.0, 0}, spec.kappa);
  write_checkpoint(dir / "initial.ckpt", SolverState{theta0, 0.0, 0}, spec.kappa);
  m.artifacts.push_back("forcing.ckpt");
  m.artifacts.push_back("initial.ckpt");

  EvolveOptions eo;
  eo.sample_interval = spec.sample_interval;
  eo.keep_snapshots = true;
  eo.snapshot_stride = spec.snapshot_stride;
  eo.dense_until = spec.dense_until;

  std::vector<TrajectorySample> partial;
  SolverState last{theta0, 0.0, 0};
  const Observer watch = [&](const SolverState& s) {
    partial.push_back(measure(s));
    last = s;
  };

  auto finish = [&]() {
    m.finished = utc_now();
    std::string records;
    for (const auto& r : m.reports) records += r.to_record() + "\n";
    write_text(dir / "reports.txt", records);
    m.artifacts.push_back("reports.txt");
    m.artifacts.push_back("manifest.json");
    const fs::path tmp = dir / "manifest.json.tmp";
    write_text(tmp, m.to_json());
    fs::rename(tmp, dir / "manifest.json");
  };

  TrajectoryRecord traj;
  SolverState state{theta0, 0.0, 0};
  try {
    traj = evolve_from(config, state, spec.T, eo, {watch});
  } catch (const SolverAbort& e) {
    write_trajectory_csv(dir / "trajectory.partial.csv", partial);
    write_checkpoint(dir / "last.ckpt", last, spec.kappa);
    m.artifacts.push_back("trajectory.partial.csv");
    m.artifacts.push_back("last.ckpt");
    m.status = "solver_abort";
    m.exit_code = kExitSolverAbort;
    m.error = e.what();
    finish();
    return m;
  }

  write_trajectory_csv(dir / "trajectory.csv", traj.samples);
  m.artifacts.push_back("trajectory.csv");
  for (const char* c : kColumns) {
    write_series_csv(dir / "series" / (std::string(c) + ".csv"), traj.series(c));
    m.artifacts.push_back(std::string("series/") + c + ".csv");
  }
  write_checkpoint(dir / "final.ckpt", state, spec.kappa);
  m.artifacts.push_back("final.ckpt");
  if (spec.save_snapshots) {
    fs::create_directories(dir / "snapshots");
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      char name[40];
      std::snprintf(name, sizeof name, "snap_%06zu.ckpt", i);
      write_checkpoint(dir / "snapshots" / name, traj.snapshots[i], spec.kappa);
    }
    m.artifacts.push_back("snapshots/");
  }

  std::vector<std::string> checks;
  for (const auto& c : spec.checks)
    if (c != "continuity") checks.push_back(c);
  CheckOptions co = spec.check_options;
  co.threads = std::max(co.threads, options.threads);
  try {
    CheckRun run = run_checks(traj, checks, co);
    m.ledger = run.ledger;
    m.reports = std::move(run.reports);
  } catch (const InputError& e) {
    CheckReport r;
    r.name = "checks";
    r.status = CheckStatus::Fail;
    r.note = e.what();
    m.reports.push_back(r);
  }

  if (spec.continuity && std::find(spec.checks.begin(), spec.checks.end(), "continuity") != spec.checks.end()) {
    const auto& c = *spec.continuity;
    const FourierMode pm{c.k1, c.k2, c.epsilon, 0.0};
    const SpectralField theta_b = theta0 + field_from_modes(config.grid, std::span(&pm, 1));
    const ContinuityResult res = continuity_probe(config, theta0, theta_b, c.T, spec.sample_interval);
    write_series_csv(dir / "series" / "continuity_ratio.csv", res.ratio);
    m.artifacts.push_back("series/continuity_ratio.csv");
    m.reports.push_back(res.report());
    sort_reports(m.reports);
  }

  const bool ok = std::all_of(m.reports.begin(), m.reports.end(), [](const CheckReport& r) { return r.passed(); });
  m.status = ok ? "pass" : "fail";
  m.exit_code = ok ? kExitPass : kExitCheckFail;
  finish();
  return m;
}

TrajectoryRecord load_trajectory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InputError("'" + dir.string() + "' is not a run directory");
  TrajectoryRecord rec;
  const Checkpoint forcing = read_checkpoint(dir / "forcing.ckpt");
  rec.kappa = forcing.kappa;
  rec.forcing = forcing.state.theta;

  std::ifstream in(dir / "trajectory.csv");
  if (!in) throw InputError("missing trajectory.csv in '" + dir.string() + "'");
  std::string line;
  std::getline(in, line);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10) throw InputError("trajectory.csv:" + std::to_string(lineno) + ": expected 10 columns");
    TrajectorySample s;
    try {
      s.t = std::stod(cells[0]);
      s.step = std::stoull(cells[1]);
      double* fields[] = {&s.l2, &s.linf, &s.h1, &s.h32, &s.half_sq, &s.int_half_sq, &s.int_h32_sq, &s.int_work};
      for (int i = 0; i < 8; ++i) *fields[i] = std::stod(cells[2 + i]);
    } catch (const std::exception&) {
      throw InputError("trajectory.csv:" + std::to_string(lineno) + ": malformed number");
    }
    rec.samples.push_back(s);
  }
  if (rec.samples.empty()) throw InputError("trajectory.csv in '" + dir.string() + "' has no samples");

  if (fs::is_directory(dir / "snapshots")) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir / "snapshots"))
      if (e.path().extension() == ".ckpt") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      Checkpoint ck = read_checkpoint(f);
      if (!(ck.state.theta.grid() == rec.forcing.grid()))
        throw InputError("snapshot '" + f.string() + "' has a different grid");
      rec.snapshots.push_back(std::move(ck.state));
    }
  }
  return rec;
}

}  // namespace sqg
