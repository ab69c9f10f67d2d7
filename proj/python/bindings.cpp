#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "sqg/checkpoint.hpp"
#include "sqg/dissipation.hpp"
#include "sqg/error.hpp"
#include "sqg/experiment.hpp"
#include "sqg/norms.hpp"
#include "sqg/operators.hpp"
#include "sqg/scenario.hpp"

namespace py = pybind11;
using namespace sqg;

namespace {

py::array_t<double> grid_array(const std::vector<double>& v, int n) {
  py::array_t<double> out({n, n});
  std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(double));
  return out;
}

py::array_t<double> series_array(const Series& s) {
  py::array_t<double> out({static_cast<py::ssize_t>(s.size()), py::ssize_t{2}});
  auto a = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < s.size(); ++i) {
    a(i, 0) = s[i].first;
    a(i, 1) = s[i].second;
  }
  return out;
}

Series to_series(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 2 || a.shape(1) != 2) throw InputError("series must have shape (N, 2)");
  auto r = a.unchecked<2>();
  Series s;
  for (py::ssize_t i = 0; i < r.shape(0); ++i) s.emplace_back(r(i, 0), r(i, 1));
  return s;
}

std::vector<FourierMode> to_modes(const std::vector<std::tuple<int, int, double, double>>& modes) {
  std::vector<FourierMode> out;
  for (const auto& [k1, k2, a, b] : modes) out.push_back({k1, k2, a, b});
  return out;
}

py::dict report_dict(const CheckReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["status"] = to_string(r.status);
  d["passed"] = r.passed();
  d["fitted_name"] = r.fitted_name;
  d["fitted"] = r.fitted;
  d["tolerance"] = r.tolerance;
  d["t_min"] = r.t_min;
  d["t_max"] = r.t_max;
  py::dict values;
  for (const auto& [k, v] : r.values) values[py::str(k)] = v;
  d["values"] = values;
  d["note"] = r.note;
  d["record"] = r.to_record();
  return d;
}

py::dict ledger_dict(const ConstantsLedger& L) {
  py::dict d;
  d["kappa"] = L.kappa;
  d["f_l2"] = L.f_l2;
  d["f_linf"] = L.f_linf;
  d["f_h1"] = L.f_h1;
  d["c3"] = L.c3;
  d["theta0_linf"] = L.theta0_linf;
  d["theta0_l2"] = L.theta0_l2;
  d["calpha_bound"] = L.calpha_bound;
  const std::pair<const char*, const FittedConstant*> fitted[] = {
      {"c0", &L.c0}, {"c_linf", &L.c_linf}, {"c_holder", &L.c_holder}, {"c1", &L.c1}, {"c2", &L.c2},
      {"c4", &L.c4}, {"c_h1", &L.c_h1},     {"c_h32", &L.c_h32},       {"c_r2", &L.c_r2}};
  for (const auto& [name, c] : fitted) d[name] = c->value;
  return d;
}

SolverConfig make_config(int n, double kappa, double dt, const SpectralField* forcing, const std::string& scheme,
                         bool dealias) {
  auto c = SolverConfig::make(kappa, TorusGrid(n));
  c.dt.dt = dt;
  if (forcing) c.forcing = *forcing;
  if (scheme == "ifrk2") c.scheme = TimeScheme::IntegratingFactorRK2;
  else if (scheme == "imex1") c.scheme = TimeScheme::Imex1;
  else throw InputError("scheme must be ifrk2 or imex1");
  c.dealias = dealias;
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_sqg, m) {
  m.doc() = "Forced critical SQG solver and attractor diagnostics";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolverAbort>(m, "SolverAbort", PyExc_RuntimeError);

  py::class_<SpectralField>(m, "Field")
      .def_static("from_modes",
                  [](int n, const std::vector<std::tuple<int, int, double, double>>& modes) {
                    return field_from_modes(TorusGrid(n), to_modes(modes));
                  },
                  py::arg("n"), py::arg("modes"), "Sum of (k1, k2, cos_amp, sin_amp) plane waves.")
      .def_static("random",
                  [](int n, unsigned long long seed, double kmax, double slope) {
                    return random_band_limited(TorusGrid(n), seed, kmax, slope);
                  },
                  py::arg("n"), py::arg("seed"), py::arg("kmax"), py::arg("slope") = 0.0)
      .def_static("from_samples",
                  [](py::array_t<double, py::array::c_style | py::array::forcecast> a) {
                    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw InputError("samples must be square");
                    auto r = forward_transform(std::span<const double>(a.data(), a.size()),
                                               TorusGrid(static_cast<int>(a.shape(0))));
                    return py::make_tuple(r.field, r.mean);
                  },
                  "Returns (field, mean).")
      .def_property_readonly("n", [](const SpectralField& f) { return f.grid().n(); })
      .def("samples", [](const SpectralField& f) { return grid_array(f.samples(), f.grid().n()); })
      .def("mode", &SpectralField::mode)
      .def("hs_norm", &hs_norm, py::arg("s"))
      .def("linf", &linf_norm, py::arg("oversample") = 1)
      .def("fractional_laplacian", &fractional_laplacian, py::arg("s"))
      .def("velocity", &riesz_velocity)
      .def("dealias", &dealias)
      .def("regrid", [](const SpectralField& f, int n) { return regrid(f, TorusGrid(n)); })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * double())
      .def(double() * py::self)
      .def(py::self == py::self);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init([](int n, double kappa, double dt, const SpectralField* forcing, const std::string& scheme,
                       bool dealias) { return make_config(n, kappa, dt, forcing, scheme, dealias); }),
           py::arg("n"), py::arg("kappa"), py::arg("dt") = 1e-3, py::arg("forcing") = nullptr,
           py::arg("scheme") = "ifrk2", py::arg("dealias") = true)
      .def_readonly("kappa", &SolverConfig::kappa)
      .def_readonly("forcing", &SolverConfig::forcing);

  py::class_<TrajectoryRecord>(m, "Trajectory")
      .def_readonly("kappa", &TrajectoryRecord::kappa)
      .def_readonly("forcing", &TrajectoryRecord::forcing)
      .def("series", [](const TrajectoryRecord& r, const std::string& name) { return series_array(r.series(name)); })
      .def_property_readonly("times",
                             [](const TrajectoryRecord& r) {
                               std::vector<double> t;
                               for (const auto& s : r.samples) t.push_back(s.t);
                               return t;
                             })
      .def_property_readonly("snapshots",
                             [](const TrajectoryRecord& r) {
                               py::list out;
                               for (const auto& s : r.snapshots) out.append(py::make_tuple(s.t, s.theta));
                               return out;
                             })
      .def("__len__", [](const TrajectoryRecord& r) { return r.samples.size(); });

  m.def("nonlinear_term", &nonlinear_term, py::arg("theta"), py::arg("dealias") = true);
  m.def(
      "evolve",
      [](const SolverConfig& c, const SpectralField& theta0, double T, double sample_interval, bool keep_snapshots,
         int snapshot_stride, double dense_until) {
        py::gil_scoped_release release;
        return evolve(c, theta0, T, EvolveOptions{sample_interval, keep_snapshots, snapshot_stride, dense_until});
      },
      py::arg("config"), py::arg("theta0"), py::arg("T"), py::arg("sample_interval") = 0.01,
      py::arg("keep_snapshots") = false, py::arg("snapshot_stride") = 1, py::arg("dense_until") = 0.0);
  m.def(
      "step",
      [](const SolverConfig& c, const SpectralField& theta, double dt) {
        return step(c, SolverState{theta, 0.0, 0}, dt).theta;
      },
      py::arg("config"), py::arg("theta"), py::arg("dt"));

  m.def(
      "run_checks",
      [](const TrajectoryRecord& traj, const std::vector<std::string>& checks, int threads) {
        CheckOptions opt;
        opt.threads = threads;
        CheckRun run;
        {
          py::gil_scoped_release release;
          run = run_checks(traj, checks, opt);
        }
        py::list reports;
        for (const auto& r : run.reports) reports.append(report_dict(r));
        py::dict d;
        d["passed"] = run.passed();
        d["reports"] = reports;
        d["ledger"] = ledger_dict(run.ledger);
        return d;
      },
      py::arg("trajectory"), py::arg("checks"), py::arg("threads") = 1);
  m.def("known_checks", &known_checks);

  m.def(
      "fit_decay_envelope",
      [](py::array_t<double> series, double asymptote) {
        auto f = fit_decay_envelope(to_series(series), asymptote);
        py::dict d;
        d["rate"] = f.rate;
        d["prefactor"] = f.prefactor;
        d["asymptote"] = f.asymptote;
        d["t_start"] = f.t_start;
        d["max_violation"] = f.max_violation;
        d["below_asymptote"] = f.below_asymptote;
        return d;
      },
      py::arg("series"), py::arg("asymptote") = 0.0);
  m.def(
      "absorbing_entry_time",
      [](py::array_t<double> series, double radius) -> py::object {
        auto e = absorbing_entry_time(to_series(series), radius);
        if (!e.entered) return py::none();
        return py::float_(e.entry_time);
      },
      py::arg("series"), py::arg("radius"), "Entry time, or None when the ball is never entered for good.");

  m.def("alpha_choice", &alpha_choice, py::arg("k_inf"), py::arg("kappa"), py::arg("c3") = 64.0);
  m.def("xi_profile", &xi_profile, py::arg("t"), py::arg("alpha"), py::arg("xi0"));
  m.def("t_alpha", &t_alpha, py::arg("alpha"), py::arg("xi0"));
  m.def("xi_ode_residual", &xi_ode_residual, py::arg("alpha"), py::arg("xi0"), py::arg("points") = 200);
  m.def(
      "holder_seminorm",
      [](const SpectralField& f, double alpha, double xi, double radius) {
        return holder_seminorm(f, make_holder_probe(f.grid(), alpha, xi, radius));
      },
      py::arg("field"), py::arg("alpha"), py::arg("xi") = 0.0, py::arg("radius") = 0.25);

  m.def(
      "dissipation_integral_check",
      [](const SpectralField& f) {
        auto r = dissipation_integral_check(f);
        py::dict d;
        d["quadrature"] = r.quadrature;
        d["spectral"] = r.spectral;
        d["rel_err"] = r.rel_err;
        return d;
      },
      py::arg("field"));

  m.def(
      "degiorgi_ladder",
      [](const TrajectoryRecord& traj, double M, double t0, int k_max) {
        if (M <= 0.0) M = degiorgi_auto_level(traj, t0).M;
        auto l = degiorgi_ladder(traj, M, t0, k_max);
        py::dict d;
        d["M"] = l.M;
        d["Q"] = l.Q;
        d["ratio"] = l.ratio;
        d["eta"] = l.eta;
        d["tau"] = l.tau;
        d["converged"] = l.converged;
        d["geometric"] = l.geometric;
        d["audit_holds"] = l.audit_holds;
        return d;
      },
      py::arg("trajectory"), py::arg("M") = 0.0, py::arg("t0") = 0.5, py::arg("k_max") = 10,
      "M <= 0 selects the automatic threshold.");

  m.def(
      "continuity_probe",
      [](const SolverConfig& c, const SpectralField& a, const SpectralField& b, double T, double interval) {
        ContinuityResult r;
        {
          py::gil_scoped_release release;
          r = continuity_probe(c, a, b, T, interval);
        }
        py::dict d;
        d["ratio"] = series_array(r.ratio);
        d["max_ratio"] = r.max_ratio;
        d["growth_rate"] = r.growth_rate;
        d["initial_distance"] = r.initial_distance;
        d["identical"] = r.identical;
        return d;
      },
      py::arg("config"), py::arg("a"), py::arg("b"), py::arg("T"), py::arg("sample_interval") = 0.01);

  py::class_<ScenarioSpec>(m, "Scenario")
      .def_readonly("name", &ScenarioSpec::name)
      .def_readonly("n", &ScenarioSpec::n)
      .def_readonly("kappa", &ScenarioSpec::kappa)
      .def_readonly("T", &ScenarioSpec::T)
      .def_readonly("checks", &ScenarioSpec::checks)
      .def_readonly("source", &ScenarioSpec::source)
      .def("hash", &ScenarioSpec::hash)
      .def("solver_config", &ScenarioSpec::solver_config)
      .def("initial_field", &ScenarioSpec::initial_field);
  m.def("parse_scenario", &parse_scenario, py::arg("text"), py::arg("base_dir") = std::filesystem::path("."));
  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def(
      "run_experiment",
      [](const ScenarioSpec& spec, const std::filesystem::path& output_root, int threads) {
        RunManifest man;
        {
          py::gil_scoped_release release;
          man = run_experiment(spec, RunOptions{output_root, threads});
        }
        return man.to_json();
      },
      py::arg("spec"), py::arg("output_root") = std::filesystem::path(), py::arg("threads") = 1,
      "Runs the scenario and returns the manifest as JSON text.");
  m.def("load_trajectory", &load_trajectory, py::arg("directory"));
  m.def("sha256_hex", &sha256_hex);

  m.def(
      "write_checkpoint",
      [](const std::filesystem::path& p, const SpectralField& theta, double t, double kappa) {
        write_checkpoint(p, SolverState{theta, t, 0}, kappa);
      },
      py::arg("path"), py::arg("theta"), py::arg("t") = 0.0, py::arg("kappa") = 1.0);
  m.def(
      "read_checkpoint",
      [](const std::filesystem::path& p) {
        auto c = read_checkpoint(p);
        return py::make_tuple(c.state.theta, c.state.t, c.kappa);
      },
      py::arg("path"), "Returns (theta, t, kappa).");
}
