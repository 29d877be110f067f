"""Singular boundary points of a convex body inside an open convex region.

Boundary samples inside ``Omega`` are classified with the LGP test (a
point is singular exactly where the LGP holds).  The closure of the
singular set meets ``dOmega`` in ``Y``; each group of singular samples
sharing a supporting hyperplane ``H`` is matched with the face
``H cap Hull(Y) = Hull(H cap Y)``, giving the face family whose traces on
``Omega`` cover the singular samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from ..errors import PreconditionError
from .lgp import boundary_samples, lgp_test
from .polytope import hull
from .predicates import EPS

__all__ = ["OpenBall", "SingularFace", "SingularReport", "singular_set"]


class OpenBall:
    """Open Euclidean ball in Klein coordinates (a convex region ``Omega``)."""

    def __init__(self, center, radius):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)

    def sd(self, X):
        return np.linalg.norm(np.atleast_2d(X) - self.center, axis=1) - self.radius

    def is_convex(self):
        return True

    def to_json(self):
        return {"type": "ball", "center": self.center.tolist(), "radius": self.radius}


@dataclass
class SingularFace:
    normal: np.ndarray
    offset: float
    dim: int
    samples: list
    boundary_points: np.ndarray
    covered: int

    def to_json(self):
        return {
            "normal": [round(float(v), 12) for v in self.normal],
            "offset": round(float(self.offset), 12),
            "dim": self.dim,
            "samples": len(self.samples),
            "boundary_points": len(self.boundary_points),
            "covered": self.covered,
        }


@dataclass
class SingularReport:
    points: np.ndarray
    in_omega: np.ndarray
    singular: np.ndarray
    Y: np.ndarray
    faces: list = field(default_factory=list)
    spacing: float = 0.0
    tolerance: float = EPS

    @property
    def empty(self):
        return not np.any(self.singular)

    @property
    def eq2_ok(self):
        return all(F.covered == len(F.samples) for F in self.faces)

    def to_json(self):
        return {
            "samples": int(len(self.points)),
            "in_omega": int(self.in_omega.sum()),
            "singular": int(self.singular.sum()),
            "Y_points": int(len(self.Y)),
            "spacing": self.spacing,
            "tolerance": self.tolerance,
            "empty": self.empty,
            "faces": [F.to_json() for F in self.faces],
            "eq2_ok": self.eq2_ok,
        }


def _plane_key(n, b, digits=7):
    return tuple(np.round(np.append(n, b), digits) + 0.0)


def _bisect_crossing(omega, a, b, iters=60):
    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if omega.sd(a + mid * (b - a))[0] < 0:
            lo = mid
        else:
            hi = mid
    return a + 0.5 * (lo + hi) * (b - a)


def _plane_basis(normal):
    _, _, Vt = np.linalg.svd(np.asarray(normal, dtype=float)[None])
    return Vt[1:]


def _numeric_rank(P, tol=1e-9):
    if len(P) <= 1:
        return 0
    sv = np.linalg.svd(P - P[0], compute_uv=False)
    return int(np.sum(sv > tol * max(1.0, sv[0])))


def singular_set(body, omega, n=4000, **lgp_kw):
    """Face decomposition of ``Sing(X, Omega)`` from ``n`` ray-cast boundary samples."""
    if hasattr(omega, "is_convex") and not omega.is_convex():
        raise PreconditionError("Omega must be convex")
    if not getattr(body, "full_dim", True):
        raise PreconditionError("the body must have non-empty interior")
    X, _ = boundary_samples(body, n)
    inside = omega.sd(X) < 0
    tree = cKDTree(X)
    d1, _ = tree.query(X, k=2)
    h = float(np.median(d1[:, 1]))
    planes = [body.support(x) for x in X]
    singular = np.zeros(len(X), dtype=bool)
    for i in np.nonzero(inside)[0]:
        singular[i] = lgp_test(body, X[i], **lgp_kw).lgp
    # Y: where the closure of the singular set crosses dOmega, found on
    # segments between a singular sample and an outside sample of the same face
    Y = []
    nbrs = tree.query_ball_point(X, 2.0 * h)
    for i in np.nonzero(singular)[0]:
        ki = _plane_key(*planes[i])
        for j in nbrs[i]:
            if inside[j] or _plane_key(*planes[j]) != ki:
                continue
            Y.append(_bisect_crossing(omega, X[i], X[j]))
    Y = np.array(Y) if Y else np.zeros((0, body.dim))
    groups = {}
    for i in np.nonzero(singular)[0]:
        groups.setdefault(_plane_key(*planes[i]), []).append(i)
    faces = []
    for key in sorted(groups):
        idx = groups[key]
        nrm, off = planes[idx[0]]
        on = Y[np.abs(Y @ nrm - off) <= 1e-9] if len(Y) else Y
        if len(on) == 0:
            # the face does not reach dOmega (it lies inside Omega): use the samples themselves
            on = X[idx]
        # bisected points are coplanar only up to roundoff: hull them in plane coordinates
        B = _plane_basis(nrm)
        o = off * np.asarray(nrm)
        F = hull((on - o) @ B.T, klein=False)
        in_plane = np.abs(X[idx] @ nrm - off) <= h
        covered = int(np.sum(in_plane & F.contains((X[idx] - o) @ B.T, h)))
        faces.append(SingularFace(np.asarray(nrm), float(off), _numeric_rank(on), idx, on, covered))
    return SingularReport(X, inside, singular, Y, faces, h, lgp_kw.get("tol", EPS))
