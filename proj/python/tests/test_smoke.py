import math

import numpy as np
import pytest

import sqg


def test_field_round_trip():
    f = sqg.Field.from_modes(16, [(1, 0, 1.0, 0.0), (2, 3, 0.0, 0.5)])
    x = f.samples()
    assert x.shape == (16, 16)
    j = np.arange(16) / 16
    expected = np.cos(2 * np.pi * j)[:, None] + 0.5 * np.sin(2 * np.pi * (2 * j[:, None] + 3 * j[None, :]))
    assert np.max(np.abs(x - expected)) < 1e-13
    g, mean = sqg.Field.from_samples(x + 2.0)
    assert mean == pytest.approx(2.0)
    assert (g - f).hs_norm(0) < 1e-14
    assert f.hs_norm(0) == pytest.approx(math.sqrt(0.5 + 0.125))


def test_single_mode_decay():
    theta = sqg.Field.from_modes(32, [(1, 0, 1.0, 0.0)])
    cfg = sqg.SolverConfig(32, 1.0, dt=1e-3)
    traj = sqg.evolve(cfg, theta, 0.5, sample_interval=0.05)
    linf = traj.series("linf")
    assert linf.shape == (11, 2)
    assert linf[-1, 1] == pytest.approx(math.exp(-math.pi), rel=1e-10)
    fit = sqg.fit_decay_envelope(traj.series("l2"), 0.0)
    assert fit["rate"] == pytest.approx(2 * math.pi, rel=1e-6)


def test_checks_and_holder_helpers():
    theta = sqg.Field.from_modes(32, [(1, 0, 1.0, 0.0)])
    traj = sqg.evolve(sqg.SolverConfig(32, 1.0), theta, 1.0, sample_interval=0.01, keep_snapshots=True)
    run = sqg.run_checks(traj, ["energy_inequality", "decay_l2"])
    assert run["passed"]
    assert [r["name"] for r in run["reports"]] == ["decay_l2", "energy_inequality"]
    assert sqg.t_alpha(0.25, 1.0) == 2.0
    assert sqg.alpha_choice(1.0, 1.0) == pytest.approx(1 / 64)
    assert sqg.xi_ode_residual(0.1, 1.0) < 1e-8
    with pytest.raises(ValueError):
        sqg.alpha_choice(1.0, 1.0, c3=10.0)


def test_scenario_run(tmp_path):
    text = """[scenario]
name = py_smoke
n = 16
kappa = 1
T = 0.2
[initial]
type = modes
modes = 1 1 1 0
[output]
sample_interval = 0.01
snapshot_stride = 2
[checks]
list = energy_inequality
"""
    spec = sqg.parse_scenario(text)
    assert spec.hash() == sqg.sha256_hex(text)
    manifest = sqg.run_experiment(spec, str(tmp_path))
    assert manifest["exit_code"] == 0
    traj = sqg.load_trajectory(tmp_path / "py_smoke")
    assert len(traj) == 21
    with pytest.raises(sqg.ConfigError):
        sqg.parse_scenario(text.replace("kappa", "kapa"))


def test_checkpoint(tmp_path):
    f = sqg.Field.random(16, 3, 4.0, 1.0)
    sqg.write_checkpoint(tmp_path / "f.ckpt", f, t=0.5, kappa=0.25)
    g, t, kappa = sqg.read_checkpoint(tmp_path / "f.ckpt")
    assert g == f and t == 0.5 and kappa == 0.25
