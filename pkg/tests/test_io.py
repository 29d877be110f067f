import numpy as np
import pytest

from hcurv.hull import hull
from hcurv.io import (
    points_to_klein,
    read_points_csv,
    read_polygon_csv,
    write_hull_obj,
    write_points_csv,
    write_surface_csv,
)
from hcurv.minkowski import klein_to_hyperboloid


def test_points_round_trip(tmp_path):
    Y = np.random.default_rng(0).uniform(-0.5, 0.5, (10, 3))
    write_points_csv(tmp_path / "p.csv", Y, "klein")
    model, P = read_points_csv(tmp_path / "p.csv")
    assert model == "klein" and np.array_equal(P, Y)
    write_points_csv(tmp_path / "h.csv", klein_to_hyperboloid(Y), "hyperboloid")
    model, X = read_points_csv(tmp_path / "h.csv")
    assert np.allclose(points_to_klein(model, X), Y, atol=1e-12)


def test_point_file_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("x,y\n0.1,0.2\n")
    with pytest.raises(ValueError, match=":1: missing"):
        read_points_csv(p)
    p.write_text("# model: klein\nx,y\n0.1,0.2\n0.3\n")
    with pytest.raises(ValueError, match=":4: expected 2 columns"):
        read_points_csv(p)
    p.write_text("# model: poincare\n0.1,0.2\n")
    with pytest.raises(ValueError, match=":1: unknown model"):
        read_points_csv(p)
    p.write_text("0,0\n1,0\nfoo,1\n")
    with pytest.raises(ValueError, match=":3: non-numeric"):
        read_polygon_csv(p)


def test_polygon_and_surface_files(tmp_path):
    p = tmp_path / "poly.csv"
    p.write_text("x,y\n0,0\n1,0\n0,1\n")
    assert read_polygon_csv(p).shape == (3, 2)
    write_surface_csv(tmp_path / "s.csv", np.zeros((2, 2)), np.ones((2, 4)))
    assert (tmp_path / "s.csv").read_text().splitlines()[0] == "u0,u1,x0,x1,x2,x3"


def test_hull_obj(tmp_path):
    cube = np.array([[x, y, z] for x in (-0.5, 0.5) for y in (-0.5, 0.5) for z in (-0.5, 0.5)])
    write_hull_obj(hull(cube), tmp_path / "c.obj")
    lines = (tmp_path / "c.obj").read_text().splitlines()
    assert sum(s.startswith("v ") for s in lines) == 8
    assert sum(s.startswith("f ") for s in lines) == 12
    with pytest.raises(ValueError):
        write_hull_obj(hull(cube[:3]), tmp_path / "x.obj")
