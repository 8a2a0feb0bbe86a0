import math

import numpy as np
import pytest

import lrflow


def sound_wave(n_x=16, n_v=12, rank=6):
    grids = lrflow.PhaseGrids(n_x, n_v)
    y = grids.x2
    rho = 1.0 + 1e-3 * np.sin(2 * math.pi * y)
    u2 = 1e-3 * np.sin(2 * math.pi * y)
    return grids, lrflow.init_equilibrium(grids, rho, np.zeros_like(y), u2, rank=rank, seed=3)


def test_state_reproduces_moments():
    grids, state = sound_wave()
    assert state.rank == 6
    m = lrflow.moments(grids, state)
    np.testing.assert_allclose(m["rho"], 1.0 + 1e-3 * np.sin(2 * math.pi * grids.x2), atol=1e-8)
    assert np.max(np.abs(m["u1"])) < 1e-10
    assert lrflow.dense_f(state).shape == (16 * 16, 12 * 12)


def test_step_conserves_mass_and_keeps_bases_orthonormal():
    grids, state = sound_wave()
    cfg = lrflow.SplittingConfig()
    cfg.epsilon = 1e-2
    cfg.tau = 0.05
    cfg.order = "lie"
    integ = lrflow.ProjectorSplitting(grids, cfg, seed=2)
    for _ in range(3):
        rep = integ.step(state)
        assert abs(rep["mass_drift"]) < 1e-9
        assert rep["orthonormality_x"] < 1e-10
    assert cfg.order == "lie"
    with pytest.raises(ValueError):
        cfg.order = "yoshida"


def test_coefficient_symmetry():
    grids, state = sound_wave()
    c = lrflow.compute_coefficients(grids, state)
    for c1 in c["c1"]:
        np.testing.assert_allclose(c1, c1.T, atol=1e-13)
    for d1 in c["d1"]:
        np.testing.assert_allclose(d1, -d1.T, atol=1e-12)


def test_maccormack_conserves_mass():
    grids = lrflow.PhaseGrids(32, 4)
    x = grids.x1
    s = lrflow.make_fluid_state(1.0 + 1e-3 * np.sin(2 * math.pi * x), 1e-3 * np.sin(2 * math.pi * x), 0 * x)
    visc = lrflow.viscosity_from_epsilon(1e-3)
    m0 = s.rho.sum()
    for _ in range(5):
        s = lrflow.maccormack_step(grids, s, visc, lrflow.cfl_dt(grids, s))
    assert abs(s.rho.sum() - m0) < 1e-10
    assert s.time > 0


def test_scenario_run_both_solvers():
    cfg = lrflow.parse_config(
        "scenario = sound_wave\nsolver = both\nn_x = 16\nn_v = 12\nrank = 6\n"
        "epsilon = 1e-2\ntau = 0.1\nt_end = 0.2\n"
    )
    res = lrflow.run(cfg)
    assert res["lowrank_steps"] == 2
    assert res["maccormack_steps"] > 2
    assert len(res["comparison"]) == 1
    assert res["comparison"][0]["err_rho"] < 0.2
    snap = res["lowrank_snapshots"][-1]
    assert snap["rho"].shape == (256,)


def test_bad_config_is_rejected():
    with pytest.raises(ValueError):
        lrflow.parse_config("colour = red\n")
    cfg = lrflow.ScenarioConfig()
    cfg.rank = 3
    with pytest.raises(ValueError):
        lrflow.validate(cfg)
