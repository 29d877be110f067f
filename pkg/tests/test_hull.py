from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hcurv.errors import GeometryError, PreconditionError
from hcurv.fixtures import available, load_fixture
from hcurv.hull import (
    LGP,
    NON_STRICT,
    STRICT,
    CappedBall,
    KleinBall,
    OpenBall,
    Stadium,
    affine_rank,
    det_sign,
    exact_det,
    face_identity_residual,
    faces,
    hull,
    lgp_test,
    orient,
    singular_set,
)
from hcurv.minkowski import hyperboloid_to_klein, klein_to_hyperboloid

import oracles


def _ball_points(rng, n, r=0.6, d=3):
    X = rng.normal(size=(n, d))
    return r * X / np.linalg.norm(X, axis=1, keepdims=True) * rng.uniform(0.3, 1.0, (n, 1))


def test_exact_predicates():
    M = [[1, 2, 3], [4, 5, 6], [7, 8, 9]]
    assert exact_det(M) == 0
    assert exact_det([[Fraction(1, 3), 1], [1, 3]]) == 0
    assert det_sign(M) == 0
    tiny = np.array([[1.0, 1.0], [1.0, 1.0 + 2.0**-50]])
    assert det_sign(tiny) == 1
    assert orient([[0, 0], [1, 0]], [0.3, 1e-17]) == 1
    assert orient([[0, 0], [1, 0]], [0.3, 0.0]) == 0
    assert affine_rank(np.array([[0, 0, 0], [1, 1, 1], [2, 2, 2.0]])) == 1


def test_tetrahedron_and_pyramid():
    T = np.array([[0, 0, 0], [0.5, 0, 0], [0, 0.5, 0], [0, 0, 0.5]])
    assert hull(T).f_vector() == [4, 6, 4]
    S = np.array([[-0.25, -0.25, 0], [0.25, -0.25, 0], [0.25, 0.25, 0], [-0.25, 0.25, 0], [0, 0, 0.5], [0, 0, 0.0]])
    poly = hull(S)
    assert poly.f_vector() == [5, 8, 5]
    assert 5 not in poly.vertex_indices
    assert {F.points for F in poly.faces()} == oracles.brute_force_faces(S)


def test_lower_dimensional_inputs():
    tri = np.array([[0, 0, 0], [0.5, 0, 0], [0, 0.5, 0.0]])
    poly = hull(tri)
    assert not poly.full_dim and poly.f_vector() == [3, 3]
    with pytest.raises(PreconditionError):
        poly.boundary_gap(np.zeros(3))
    seg = hull(np.array([[0, 0, 0], [0.25, 0.25, 0.25], [0.5, 0.5, 0.5]]))
    assert sorted(seg.vertex_indices) == [0, 2]
    assert len(faces(np.array([[0.1, 0.2]]))) == 1


def test_klein_domain_enforced():
    with pytest.raises(GeometryError):
        hull(np.array([[1.2, 0, 0], [0, 0.1, 0], [0, 0, 0.1], [0, 0, 0]]))
    hull(np.array([[2.0, 0, 0], [0, 0.1, 0], [0, 0, 0.1], [0, 0, 0]]), klein=False)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_extreme_points_match_lp(seed):
    P = _ball_points(np.random.default_rng(seed), 30)
    assert sorted(hull(P).vertex_indices) == oracles.lp_extreme_points(P)


def test_random_lattice_against_brute_force():
    rng = np.random.default_rng(3)
    for _ in range(5):
        P = np.round(_ball_points(rng, 20) * 16) / 16
        P = np.unique(P, axis=0)
        assert {F.points for F in hull(P).faces()} == oracles.brute_force_faces(P)


def test_face_identity():
    P = _ball_points(np.random.default_rng(1), 25)
    poly = hull(P)
    for F in poly.faces()[:: max(1, len(poly.faces()) // 12)]:
        assert face_identity_residual(poly, F) <= 1e-8


def test_hull_commutes_with_isometries():
    rng = np.random.default_rng(2)
    P = _ball_points(rng, 25)
    t = 0.7
    boost = np.eye(4)
    boost[0, 0] = boost[3, 3] = np.cosh(t)
    boost[0, 3] = boost[3, 0] = np.sinh(t)
    Q = hyperboloid_to_klein(klein_to_hyperboloid(P) @ boost.T)
    assert {F.points for F in hull(P).faces()} == {F.points for F in hull(Q).faces()}


def test_ideal_points_and_edge_chord():
    rng = np.random.default_rng(4)
    P = _ball_points(rng, 30)
    a = 0.3
    p = np.array([np.cos(a), np.sin(a), 0.0])
    q = np.array([np.cos(a), -np.sin(a), 0.0])
    poly = hull(np.vstack([P, p, q]))
    assert poly.ideal.sum() == 2
    edges = {F.points for F in poly.faces() if F.dim == 1}
    assert frozenset({30, 31}) in edges


def test_lgp_taxonomy():
    ball = KleinBall(0.8)
    assert lgp_test(ball, np.array([0.8, 0, 0])).verdict == STRICT
    cap = CappedBall(0.8, height=0.5)
    assert lgp_test(cap, np.array([0.1, 0.1, 0.5])).verdict == LGP
    assert lgp_test(cap, np.array([0.8, 0.0, 0.0])).verdict == STRICT
    stadium = Stadium(0.4)
    assert all(lgp_test(stadium, j).verdict == NON_STRICT for j in stadium.junctions)
    cube = hull(np.array(load_fixture("cube")["points"]))
    # a vertex ends the edges through it, so it is extreme but not strictly
    assert lgp_test(cube, np.array([0.5, 0.5, 0.5])).verdict == NON_STRICT
    assert lgp_test(cube, np.array([0.5, 0.0, 0.5])).lgp
    assert lgp_test(cube, np.array([0.5, 0.1, -0.2])).lgp


def test_singular_set_preconditions():
    cube = hull(np.array(load_fixture("cube")["points"]))
    class Annulus(OpenBall):
        def is_convex(self):
            return False

    with pytest.raises(PreconditionError):
        singular_set(cube, Annulus([0, 0, 0], 0.5))
    flat = hull(np.array([[0, 0, 0], [0.5, 0, 0], [0, 0.5, 0.0]]))
    with pytest.raises(PreconditionError):
        singular_set(flat, OpenBall([0, 0, 0], 0.5))
    rep = singular_set(cube, OpenBall([0.5, 0.0, 0.0], 0.2), 1500)
    assert len(rep.faces) == 1
    assert np.allclose(rep.faces[0].normal, [1, 0, 0])


def test_fixture_catalogue():
    assert "cube" in available()
    fx = load_fixture("cube")
    assert hull(np.array(fx["points"])).f_vector() == fx["expected"]["f_vector"]
