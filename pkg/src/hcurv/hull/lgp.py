"""Local geodesic property: boundary points lying inside an open boundary segment.

Klein coordinates send geodesic segments to straight segments, so the
test is affine.  At a boundary point ``x`` with supporting hyperplane
``H`` any segment of ``dX`` through ``x`` lies in ``H``; the search tries
directions of ``H`` (uniform samples plus body-specific hints such as the
directions to the vertices of the contact face) at a few scales.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import GeometryError, PreconditionError
from .predicates import EPS

__all__ = [
    "LGP",
    "NON_STRICT",
    "STRICT",
    "LgpEntry",
    "lgp_test",
    "lgp_classify",
    "boundary_samples",
    "lgp_hull_consistency",
]

LGP = "lgp"
NON_STRICT = "non-strict-no-lgp"
STRICT = "strictly-extreme"

DEFAULT_SCALES = (1e-2, 1e-3, 1e-4)


@dataclass
class LgpEntry:
    point: np.ndarray
    verdict: str
    witness: tuple | None
    normal: np.ndarray
    offset: float
    scale: float | None
    tolerance: float

    @property
    def lgp(self):
        return self.verdict == LGP

    def to_json(self):
        return {
            "point": self.point.tolist(),
            "verdict": self.verdict,
            "witness": None if self.witness is None else [w.tolist() for w in self.witness],
            "normal": self.normal.tolist(),
            "offset": self.offset,
            "scale": self.scale,
            "tolerance": self.tolerance,
        }


def _plane_directions(normal, count, seed=0):
    """``count`` unit directions spanning the hyperplane orthogonal to ``normal``."""
    d = normal.size
    _, _, Vt = np.linalg.svd(normal[None])
    B = Vt[1:]
    if d == 2:
        return np.vstack([B[0], -B[0]])
    if d == 3:
        t = 2 * np.pi * np.arange(count) / count
        return np.cos(t)[:, None] * B[0] + np.sin(t)[:, None] * B[1]
    g = np.random.default_rng(seed).normal(size=(count, d - 1))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g @ B


def lgp_test(body, x, directions=64, scales=DEFAULT_SCALES, tol=EPS, project_tol=1e-6):
    """Classify ``x`` as LGP, non-strict without LGP, or strictly extreme.

    ``scales`` are fractions of the body diameter; the verdict and the
    tolerance used are returned with a witness segment when one exists.
    Points farther than ``project_tol`` from the boundary raise
    ``GeometryError``.
    """
    if not getattr(body, "full_dim", True):
        raise PreconditionError("LGP is defined for bodies with non-empty interior")
    x = np.asarray(x, dtype=float)
    gap = body.boundary_gap(x)
    if abs(gap) > tol:
        if abs(gap) > project_tol:
            raise GeometryError(f"query point is not on the boundary (gap {gap:.3e})")
        x = body.project(x, project_tol)
    n, b = body.support(x)
    W = np.vstack([body.direction_hints(x, n, b, tol), _plane_directions(n, directions)])
    # remove the normal component left by roundoff in the hints
    W = W - np.outer(W @ n, n)
    W = W[np.linalg.norm(W, axis=1) > 0.5]
    W /= np.linalg.norm(W, axis=1, keepdims=True)
    diam = body.diameter()
    one_sided = False
    for s in scales:
        step = s * diam
        plus = body.contains(x + step * W, tol)
        minus = body.contains(x - step * W, tol)
        both = plus & minus
        if np.any(both):
            k = int(np.argmax(both))
            witness = (x - step * W[k], x + step * W[k])
            return LgpEntry(x, LGP, witness, n, b, s, tol)
        one_sided |= bool(np.any(plus | minus))
    return LgpEntry(x, NON_STRICT if one_sided else STRICT, None, n, b, None, tol)


def lgp_classify(body, X, **kw):
    return [lgp_test(body, x, **kw) for x in np.atleast_2d(X)]


def _fibonacci_sphere(n):
    i = np.arange(n) + 0.5
    z = 1 - 2 * i / n
    r = np.sqrt(1 - z * z)
    phi = np.pi * (1 + 5**0.5) * i
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], -1)


def boundary_samples(body, n):
    """Ray-cast boundary samples from an interior point (circle or Fibonacci sphere of directions)."""
    c = body.interior_point()
    if body.dim == 2:
        t = 2 * np.pi * (np.arange(n) + 0.5) / n
        D = np.stack([np.cos(t), np.sin(t)], -1)
    elif body.dim == 3:
        D = _fibonacci_sphere(n)
    else:
        raise ValueError("boundary sampling supports dimensions 2 and 3")
    X = np.array([c + body.ray_boundary(c, w) * w for w in D])
    return X, D


def _spacing(X):
    from scipy.spatial import cKDTree

    d, _ = cKDTree(X).query(X, k=2)
    return float(np.median(d[:, 1]))


def lgp_hull_consistency(body, n=4000, boundary=None, cells=2.0, **kw):
    """Check ``Y = dX cap Hull(dY)`` on boundary samples, ``Y`` the LGP set.

    ``dY`` defaults to the LGP samples with a non-LGP sample among their
    nearest neighbours.  Disagreements are tolerated within ``cells``
    sample spacings of ``dY``.
    """
    from scipy.spatial import cKDTree

    from .polytope import hull

    X, _ = boundary_samples(body, n)
    entries = lgp_classify(body, X, **kw)
    Y = np.array([e.lgp for e in entries])
    h = _spacing(X)
    tree = cKDTree(X)
    if boundary is None:
        if not np.any(Y) or np.all(Y):
            dY = np.zeros((0, body.dim))
        else:
            nb = tree.query_ball_point(X, 1.5 * h)
            rim = [i for i in np.nonzero(Y)[0] if np.any(~Y[nb[i]])]
            dY = X[rim]
    else:
        dY = np.asarray(boundary, dtype=float)
    if len(dY) == 0:
        predicted = np.zeros(len(X), dtype=bool)
    else:
        H = hull(dY, klein=False)
        predicted = H.contains(X, max(EPS, 1e-9))
    mismatch = np.nonzero(predicted != Y)[0]
    if len(mismatch) and len(dY):
        dist, _ = cKDTree(dY).query(X[mismatch])
    else:
        dist = np.zeros(len(mismatch))
    worst = float(dist.max() / h) if len(dist) else 0.0
    return {
        "samples": len(X),
        "spacing": h,
        "lgp_count": int(Y.sum()),
        "boundary_count": len(dY),
        "mismatches": int(len(mismatch)),
        "max_mismatch_cells": worst,
        "ok": bool(worst <= cells),
    }
