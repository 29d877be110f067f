import numpy as np
import pytest

from hcurv.domains import Ball, Polygon
from hcurv.hull import ebc_scan, ebc_test, radius_schedule

import oracles

SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
L_SHAPE = np.array([[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]])


def test_radius_schedule():
    r = radius_schedule(Ball(1.0))
    assert r[0] == pytest.approx(2 * np.sqrt(2))
    assert np.allclose(np.array(r[:-2]) / np.array(r[1:-1]), 2.0)
    assert r[-1] == 1e-3 < r[-2] <= 2e-3


@pytest.mark.parametrize("x", [[1.0, 0.0], [0.0, -1.0], [np.cos(1.0), np.sin(1.0)]])
def test_disk_passes(x):
    e = ebc_test(Ball(1.0), np.array(x))
    assert e.passed
    assert np.linalg.norm(e.center - np.array(x)) == pytest.approx(e.radius)
    assert Ball(1.0).sd(e.center[None])[0] >= e.radius - 1e-9


def test_convex_corner_passes_and_reflex_corner_fails():
    sq = Polygon(SQUARE)
    assert ebc_test(sq, SQUARE[2]).passed
    L = Polygon(L_SHAPE)
    radii = radius_schedule(L)
    e = ebc_test(L, L_SHAPE[3], radii)
    assert not e.passed
    margins = [t["best_margin"] for t in e.certificate["tried"]]
    ref = oracles.ebc_brute_force(L_SHAPE, L_SHAPE[3], radii)
    assert max(margins) < 0 and max(ref) < 0
    assert np.allclose(margins, ref, atol=1e-2 * np.array(radii))


def test_scan_reports_every_point():
    L = Polygon(L_SHAPE)
    out, ok = ebc_scan(L, L.vertices)
    assert not ok
    assert [e.passed for e in out] == [True, True, True, False, True, True]
    assert all("tried" in e.to_json()["certificate"] for e in out)
