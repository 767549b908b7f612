"""Smoke tests for the python module: a thin pass over each exposed operation."""

import math

import numpy as np
import pytest

import _pmelab as pme


def test_grid_and_field_roundtrip():
    g = pme.SpaceTimeGrid.make1d(0.0, 1.0, 17, 5, 0.5)
    assert g.dim == 1
    assert g.num_nodes() == 17
    assert g.nt == 5
    a = np.linspace(0.0, 1.0, 17)[None, :].repeat(5, axis=0)
    f = pme.ScalarField.from_array(g, a, nonneg=True)
    assert np.allclose(f.to_array(), a)
    assert f.min() == 0.0 and f.max() == 1.0


def test_bad_shape_rejected():
    g = pme.SpaceTimeGrid.make1d(0.0, 1.0, 17, 5, 0.5)
    with pytest.raises(ValueError):
        pme.ScalarField.from_array(g, np.zeros((4, 17)))


def test_barenblatt_profile():
    # m = 2 in one dimension: center value C (t + t0)^(-1/3)
    assert pme.barenblatt(0.0, 0.0) == pytest.approx(1.0)
    assert pme.barenblatt(0.0, 1.0) == pytest.approx(2.0 ** (-1.0 / 3.0))
    assert pme.barenblatt(10.0, 0.0) == 0.0


def test_solver_constant_is_stationary():
    g = pme.SpaceTimeGrid.make1d(0.0, 1.0, 17, 9, 0.5)
    bc = pme.ScalarField.constant(g, 1.3)
    u = pme.solve_pme([1.3] * 17, bc, m=2.0)
    assert np.allclose(u.to_array(), 1.3, atol=1e-12)


def test_solver_tracks_exact_solution():
    g = pme.SpaceTimeGrid.make1d(-4.0, 4.0, 257, 65, 0.5)
    exact = np.array(
        [[pme.barenblatt(g.x(n), g.t(k)) for n in range(g.num_nodes())]
         for k in range(g.nt)]
    )
    bc = pme.ScalarField.from_array(g, exact, nonneg=True)
    u = pme.solve_pme(list(exact[0]), bc).to_array()
    assert np.max(np.abs(u[-1] - exact[-1])) < 0.02


def test_mollify_constant_fixed_point():
    g = pme.SpaceTimeGrid.make1d(0.0, 1.0, 9, 21, 1.0)
    f = pme.ScalarField.constant(g, 2.0)
    out = pme.mollify_time(f, h=0.1, from_initial_slice=True).to_array()
    assert np.allclose(out, 2.0, atol=1e-13)


def test_obstacle_solver_feasible():
    g = pme.SpaceTimeGrid.make1d(0.0, 1.0, 33, 9, 0.5)
    psi = pme.ScalarField.from_array(
        g,
        np.array(
            [[0.6 * max(0.0, 1.0 - ((g.x(n) - 0.5) / 0.3) ** 2) ** 2
              for n in range(33)] for _ in range(9)]
        ),
        nonneg=True,
    )
    bc = pme.ScalarField.constant(g, 0.7)
    u, feasibility, increments = pme.solve_obstacle(psi, bc, [0.7] * 33)
    assert u.to_array().min() >= -1e-12
    assert all(b <= a + 1e-12 for a, b in zip(feasibility, feasibility[1:]))
    assert feasibility[-1] <= 2.0 * math.sqrt(0.0125)


def test_weak_residuals_small_for_exact_solution():
    g = pme.SpaceTimeGrid.make1d(0.0, 1.0, 65, 65, 1.0)
    prof = np.array(
        [[math.sqrt(0.5 * g.x(n) + 0.25) for n in range(65)] for _ in range(65)]
    )
    u = pme.ScalarField.from_array(g, prof, nonneg=True)
    res = pme.weak_residuals(u, m=2.0, count=8, seed=5)
    assert max(abs(r) for r in res) < 5e-3


def test_run_scenario(tmp_path):
    cfg = tmp_path / "mini.cfg"
    cfg.write_text(
        "[grid]\nnx = 17\nnt = 5\nT = 0.5\n"
        "[data]\ng = constant 1.0\n"
        "[checks]\nrun = feasibility\n"
        "[output]\nname = mini\n"
    )
    ok, summary, artifacts = pme.run_scenario(str(cfg), str(tmp_path / "out"))
    assert ok
    assert "result: pass" in summary
    assert any(a.endswith("mini-report.csv") for a in artifacts)
