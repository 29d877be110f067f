import json

import numpy as np
import pytest

from hcurv.curvature import CurvatureSpec
from hcurv.domains import Ball, Interval, Polygon
from hcurv.errors import DomainError
from hcurv.plateau import (
    SolveConfig,
    barrier_check,
    build_stencil,
    solve,
    write_grid_csv,
    write_log_jsonl,
    write_obj,
)
from hcurv.plateau import _kernels_py
from hcurv.plateau.kernels import principal

import oracles


@pytest.fixture(scope="module")
def small_ball():
    return solve(Ball(1.0), SolveConfig(CurvatureSpec.power_sigma(2, 2), 0.5, n=33))


def test_interval_solution_is_the_circular_arc():
    sol = solve(Interval(-1.0, 1.0), SolveConfig(CurvatureSpec.power_sigma(1, 1), 0.5, n=257))
    err = np.abs(sol.u - oracles.cap_height(sol.coords, 0.5)).max()
    assert err <= 1e-4
    assert sol.max_residual() <= 1e-9


def test_config_validation():
    spec = CurvatureSpec.power_sigma(2, 2)
    with pytest.raises(DomainError):
        SolveConfig(spec, 1.0)
    with pytest.raises(ValueError):
        SolveConfig(spec, 0.5, heights=(0.01, 0.1))
    with pytest.raises(ValueError):
        SolveConfig(spec, 0.5, heights=(0.1, 0.01), margins=(0.1,))
    with pytest.raises(ValueError):
        SolveConfig(spec, 0.5, n=3)
    cfg = SolveConfig(spec, 0.3)
    assert cfg.path() == [0.95, 0.85, 0.75, 0.65, 0.3]
    assert SolveConfig.from_json(json.loads(json.dumps(cfg.to_json()))) == cfg
    with pytest.raises(ValueError):
        SolveConfig.from_json({**cfg.to_json(), "bogus": 1})


def test_kernel_backends_agree(small_ball):
    st = small_ball.stencil
    rng = np.random.default_rng(0)
    u = small_ball.u * (1 + 1e-3 * rng.standard_normal(st.N))
    a = principal(u, st.nbr, st.s, st.bval, st.h)
    b = principal(u, st.nbr, st.s, st.bval, st.h, impl=_kernels_py)
    for x, y in zip(a, b):
        assert np.allclose(x, y, rtol=1e-13, atol=1e-13)


def test_ball_solution_and_barriers(small_ball):
    assert np.abs(small_ball.u - oracles.cap_height(small_ball.coords, 0.5)).max() < 5e-3
    assert barrier_check(small_ball)["ok"]
    assert small_ball.summary()["height"] == pytest.approx(small_ball.config.heights[-1])


def test_square_solution_is_convex_and_bounded():
    sq = Polygon([[-1, -1], [1, -1], [1, 1], [-1, 1]])
    sol = solve(sq, SolveConfig(CurvatureSpec.power_sigma(2, 2), 0.5, n=33))
    assert np.all(sol.lam > 0)
    # inscribed and circumscribed caps bracket the solution
    inner = oracles.cap_height(sol.coords, 0.5, 1.0)
    mask = np.sum(sol.coords**2, axis=1) < 1.0
    assert np.all(sol.u[mask] >= inner[mask] - sol.h)
    assert np.all(sol.u <= oracles.cap_height(sol.coords, 0.5, np.sqrt(2)) + sol.h)


def test_exports(small_ball, tmp_path):
    write_grid_csv(small_ball, tmp_path / "g.csv")
    rows = (tmp_path / "g.csv").read_text().splitlines()
    assert rows[0] == "x,y,u" and len(rows) == small_ball.stencil.N + 1
    write_obj(small_ball, tmp_path / "s.obj")
    text = (tmp_path / "s.obj").read_text()
    assert text.count("\nv ") == small_ball.stencil.N and "\nf " in text
    write_log_jsonl(small_ball.history, tmp_path / "log.jsonl")
    recs = [json.loads(s) for s in (tmp_path / "log.jsonl").read_text().splitlines()]
    assert len(recs) == len(small_ball.history)


def test_stencil_rejects_empty_level():
    from hcurv.plateau import Grid

    dom = Ball(1.0)
    with pytest.raises(ValueError):
        build_stencil(dom, Grid.over(dom, 9), 2.0, 0.1)
