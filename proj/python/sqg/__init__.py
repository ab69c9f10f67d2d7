"""Forced critical SQG on the unit torus: solver, diagnostics and scenario runner."""

import json as _json

from ._sqg import (
    ConfigError,
    Field,
    InputError,
    Scenario,
    SolverAbort,
    SolverConfig,
    Trajectory,
    absorbing_entry_time,
    alpha_choice,
    continuity_probe,
    degiorgi_ladder,
    dissipation_integral_check,
    evolve,
    fit_decay_envelope,
    holder_seminorm,
    known_checks,
    load_scenario,
    load_trajectory,
    nonlinear_term,
    parse_scenario,
    read_checkpoint,
    run_checks,
    sha256_hex,
    step,
    t_alpha,
    write_checkpoint,
    xi_ode_residual,
    xi_profile,
)
from ._sqg import run_experiment as _run_experiment


def run_experiment(spec, output_root="", threads=1):
    """Run a scenario and return its manifest as a dict."""
    return _json.loads(_run_experiment(spec, output_root, threads))


__all__ = [name for name in dir() if not name.startswith("_")]
