"""Convex hulls of point sets in the Klein ball and their face lattices.

Candidate facets come from qhull; every candidate is then re-derived
combinatorially: the set of input points on its hyperplane is found with
exact orientation predicates, coplanar candidates merge into one facet,
and the full face lattice is the closure of the facets under intersection.
Faces are identified by the set ``H cap Y`` of input points they contain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from ..errors import GeometryError, PreconditionError
from .bodies import ConvexBody
from .predicates import EPS, affine_rank, orient_many

__all__ = ["FaceRecord", "Polytope", "hull", "faces", "face_identity_residual"]

KLEIN_TOL = 1e-12


@dataclass(frozen=True)
class FaceRecord:
    """A face ``F_H(Y) = H cap Hull(Y)``.

    ``normal``/``offset`` describe a supporting hyperplane ``<n, y> = b``
    with ``<n, y> <= b`` on the body; ``points`` is ``H cap Y`` as input
    indices and ``vertices`` the polytope vertices among them.
    """

    normal: np.ndarray
    offset: float
    points: frozenset
    vertices: frozenset
    dim: int

    def key(self):
        return self.points

    def to_json(self):
        return {
            "normal": np.asarray(self.normal).tolist(),
            "offset": float(self.offset),
            "points": sorted(int(i) for i in self.points),
            "vertices": sorted(int(i) for i in self.vertices),
            "dim": self.dim,
        }


def _plane_through(P):
    """Unit normal and offset of the hyperplane through the rows of ``P``."""
    c = P.mean(axis=0)
    _, _, Vt = np.linalg.svd(P - c)
    n = Vt[-1]
    return n, float(n @ c)


class Polytope(ConvexBody):
    """Vertex-facet representation of ``Hull(Y)`` for a finite ``Y``."""

    kind = "polytope"

    def __init__(self, points, facets, full_dim=True, frame=None):
        self.points = np.asarray(points, dtype=float)
        self.dim = self.points.shape[1]
        self.facets = list(facets)
        self.full_dim = full_dim
        self.frame = frame
        verts = set()
        for F in self.facets:
            verts |= F.vertices
        self.vertex_indices = np.array(sorted(verts), dtype=int)
        if len(self.facets):
            self.N = np.array([F.normal for F in self.facets])
            self.b = np.array([F.offset for F in self.facets])
        self._faces = None

    @property
    def vertices(self):
        return self.points[self.vertex_indices]

    @property
    def ideal(self):
        return np.abs(np.linalg.norm(self.vertices, axis=1) - 1.0) <= KLEIN_TOL

    def _need_full(self):
        if not self.full_dim:
            raise PreconditionError("the hull is lower-dimensional; Conv° operations are refused")

    # -- ConvexBody interface
    def contains(self, Y, tol=EPS):
        """Membership to ``tol``; lower-dimensional hulls test their affine hull too."""
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        ok = np.ones(len(Y), dtype=bool)
        if not self.full_dim:
            c, B = self.frame
            R = (Y - c) - (Y - c) @ B.T @ B
            ok &= np.linalg.norm(R, axis=1) <= tol
        if self.facets:
            ok &= np.all(Y @ self.N.T - self.b <= tol, axis=1)
        return ok

    def boundary_gap(self, x):
        self._need_full()
        return float(np.max(self.N @ np.asarray(x, dtype=float) - self.b))

    def support(self, x):
        self._need_full()
        k = int(np.argmax(self.N @ np.asarray(x, dtype=float) - self.b))
        return self.N[k], float(self.b[k])

    def ray_boundary(self, c, w):
        self._need_full()
        nw = self.N @ w
        t = np.where(nw > 0, (self.b - self.N @ c) / np.where(nw > 0, nw, 1.0), np.inf)
        return float(t.min())

    def interior_point(self):
        return self.vertices.mean(axis=0)

    def direction_hints(self, x, normal, offset, tol=EPS):
        V = self.vertices
        on = np.abs(V @ normal - offset) <= tol
        D = V[on] - x
        nd = np.linalg.norm(D, axis=1)
        return D[nd > tol] / nd[nd > tol, None]

    def diameter(self):
        V = self.vertices
        return float(np.max(np.linalg.norm(V[:, None] - V[None], axis=-1)))

    def is_vertex(self, x, tol=EPS):
        return bool(np.any(np.linalg.norm(self.vertices - np.asarray(x, dtype=float), axis=1) <= tol))

    # -- faces
    def faces(self):
        """All proper faces (dimensions ``0 .. d-1``) keyed by their point sets."""
        if self._faces is None:
            self._faces = _face_lattice(self)
        return self._faces

    def f_vector(self):
        counts = {}
        for F in self.faces():
            counts[F.dim] = counts.get(F.dim, 0) + 1
        return [counts.get(k, 0) for k in range(self.dim if self.full_dim else self.frame_dim)]

    @property
    def frame_dim(self):
        return self.dim if self.frame is None else self.frame[1].shape[0]


def _facets_full(P):
    """Exact facets of a full-dimensional point set in R^d."""
    d = P.shape[1]
    try:
        qh = ConvexHull(P)
    except QhullError as exc:  # pragma: no cover - guarded by the rank test
        raise GeometryError(f"qhull failed: {exc}") from exc
    centre = P[qh.vertices].mean(axis=0)
    seen = {}
    for simplex in qh.simplices:
        S = P[simplex]
        side = orient_many(S, P)
        ref = orient_many(S, centre[None])[0]
        if ref == 0:
            raise GeometryError("degenerate qhull facet through the interior")
        on = frozenset(np.nonzero(side == 0)[0].tolist())
        if np.any(side == -ref):
            # qhull merged a nearly coplanar configuration; redo it exactly
            return _facets_exhaustive(P, centre)
        if on in seen:
            continue
        n, b = _plane_through(P[sorted(on)])
        if n @ centre > b:
            n, b = -n, -b
        b = float(np.max(P[sorted(on)] @ n))
        seen[on] = (n, b)
    return seen


def _facets_exhaustive(P, centre):
    """Exact facets by testing every hyperplane through ``d`` input points."""
    from itertools import combinations

    d = P.shape[1]
    seen = {}
    for T in combinations(range(len(P)), d):
        S = P[list(T)]
        if affine_rank(S) < d - 1:
            continue
        side = orient_many(S, P)
        if np.any(side > 0) and np.any(side < 0):
            continue
        on = frozenset(np.nonzero(side == 0)[0].tolist())
        if on in seen:
            continue
        n, b = _plane_through(P[sorted(on)])
        if n @ centre > b:
            n = -n
        seen[on] = (n, float(np.max(P[sorted(on)] @ n)))
    return seen


def _vertices_from_facets(facet_sets, npts):
    """Points whose set of containing facets pins them down uniquely."""
    verts = set()
    for i in range(npts):
        inc = [F for F in facet_sets if i in F]
        if not inc:
            continue
        common = frozenset.intersection(*inc)
        if common == {i}:
            verts.add(i)
    return verts


def hull(points, klein=True):
    """Convex hull of a point set (Klein coordinates by default).

    Exact duplicates are merged (the first occurrence is kept).  A
    lower-dimensional input yields a polytope flagged ``full_dim=False``,
    whose facets live in its affine hull.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if klein and np.any(np.linalg.norm(P, axis=1) > 1.0 + KLEIN_TOL):
        raise GeometryError("Klein points must lie in the closed unit ball")
    _, first = np.unique(P, axis=0, return_index=True)
    keep = np.sort(first)
    P = P[keep]
    d = P.shape[1]
    r = affine_rank(P)
    if r == d:
        return _build(P, keep, full_dim=True)
    if r == 0:
        F = FaceRecord(np.zeros(d), 0.0, frozenset([0]), frozenset([0]), 0)
        poly = Polytope(P, [], full_dim=False, frame=(P[0], np.zeros((0, d))))
        poly.vertex_indices = np.array([0])
        poly._faces = [F]
        poly.input_index = keep
        return poly
    # project onto the affine hull
    c = P.mean(axis=0)
    _, _, Vt = np.linalg.svd(P - c)
    B = Vt[:r]
    Q = (P - c) @ B.T
    if r == 1:
        lo, hi = int(np.argmin(Q[:, 0])), int(np.argmax(Q[:, 0]))
        on_lo = frozenset(np.nonzero(Q[:, 0] == Q[lo, 0])[0].tolist())
        on_hi = frozenset(np.nonzero(Q[:, 0] == Q[hi, 0])[0].tolist())
        facets = [
            FaceRecord(-B[0], float(-P[lo] @ B[0]), on_lo, frozenset([lo]), 0),
            FaceRecord(B[0], float(P[hi] @ B[0]), on_hi, frozenset([hi]), 0),
        ]
    else:
        seen = _facets_full(Q)
        facet_sets = list(seen)
        verts = _vertices_from_facets(facet_sets, len(Q))
        facets = []
        for S in facet_sets:
            n, b = seen[S]
            facets.append(FaceRecord(B.T @ n, float(b + (B.T @ n) @ c), S, frozenset(S & verts), r - 1))
    poly = Polytope(P, facets, full_dim=False, frame=(c, B))
    poly.input_index = keep
    return poly


def _build(P, keep, full_dim):
    d = P.shape[1]
    seen = _facets_full(P)
    facet_sets = list(seen)
    verts = _vertices_from_facets(facet_sets, len(P))
    facets = [FaceRecord(seen[S][0], seen[S][1], S, frozenset(S & verts), d - 1) for S in facet_sets]
    poly = Polytope(P, facets, full_dim=full_dim)
    poly.input_index = keep
    return poly


def _face_lattice(poly):
    P = poly.points
    facets = {F.points: F for F in poly.facets}
    if not facets:
        return list(poly._faces or [])
    verts = set(poly.vertex_indices.tolist())
    base = list(facets)
    found = set(base)
    frontier = list(base)
    while frontier:
        new = []
        for A in frontier:
            for Fs in base:
                C = A & Fs
                if C and C not in found:
                    found.add(C)
                    new.append(C)
        frontier = new
    normals = {S: (F.normal, F.offset) for S, F in facets.items()}
    out = []
    for S in found:
        if S in normals:
            n, b = normals[S]
            dim = facets[S].dim
        else:
            inc = [F for F in poly.facets if S <= F.points]
            n = np.sum([F.normal for F in inc], axis=0)
            n = n / np.linalg.norm(n)
            b = float(np.max(P[sorted(S)] @ n))
            dim = affine_rank(P[sorted(S)])
        out.append(FaceRecord(n, b, S, frozenset(S & verts), dim))
    out.sort(key=lambda F: (F.dim, sorted(F.points)))
    return out


def faces(Y, klein=True):
    """Face lattice of ``Hull(Y)`` (indices refer to the deduplicated input)."""
    return hull(Y, klein).faces()


def face_identity_residual(poly, face, samples=4, seed=0):
    """LP check of ``H cap Hull(Y) = Hull(H cap Y)`` for one face.

    Points of ``H cap Hull(Y)`` maximizing random linear functionals are
    found by linear programming over convex weights on all of ``Y``, then
    matched against ``Hull(H cap Y)`` by a second LP.  Convex combinations
    of ``H cap Y`` are checked to lie on ``H``.  Returns the largest residual.
    """
    rng = np.random.default_rng(seed)
    P = poly.points
    n, b = np.asarray(face.normal), face.offset
    idx = sorted(face.points)
    Q = P[idx]
    k, d = len(P), P.shape[1]
    res = float(np.max(np.abs(Q @ n - b)))
    res = max(res, float(max(0.0, np.max(P @ n - b))))
    for _ in range(samples):
        c = rng.normal(size=d)
        A_eq = np.vstack([np.ones(k), P @ n])
        out = linprog(-(P @ c), A_eq=A_eq, b_eq=[1.0, b], bounds=(0, None), method="highs")
        if out.status != 0:
            return float("inf")
        z = out.x @ P
        # distance of z to Hull(H cap Y): minimize t with |sum mu q - z| <= t componentwise
        m = len(idx)
        cost = np.zeros(m + 1)
        cost[-1] = 1.0
        A_ub = np.vstack([np.hstack([Q.T, -np.ones((d, 1))]), np.hstack([-Q.T, -np.ones((d, 1))])])
        b_ub = np.concatenate([z, -z])
        A_eq2 = np.hstack([np.ones((1, m)), [[0.0]]])
        out2 = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq2, b_eq=[1.0], bounds=(0, None), method="highs")
        res = max(res, float(out2.x[-1]) if out2.status == 0 else float("inf"))
    return res
