"""Convex bodies in the Klein ball given by exact membership tests.

Every body exposes the small interface used by the LGP and singular-set
routines: tolerant membership, a supporting hyperplane at a boundary
point, ray casting from an interior point and optional direction hints
for the segment search.
"""

from __future__ import annotations

import numpy as np

from ..errors import GeometryError
from .predicates import EPS

__all__ = ["ConvexBody", "KleinBall", "CappedBall", "Stadium"]


class ConvexBody:
    """Compact convex body with non-empty interior in R^d (Klein coordinates)."""

    dim: int
    kind = "body"
    full_dim = True

    def contains(self, Y, tol=EPS):
        raise NotImplementedError

    def boundary_gap(self, x):
        """Signed defect: ``0`` on the boundary, negative inside."""
        raise NotImplementedError

    def support(self, x):
        """``(n, b)`` of a supporting hyperplane at the boundary point ``x``."""
        raise NotImplementedError

    def interior_point(self):
        raise NotImplementedError

    def diameter(self):
        raise NotImplementedError

    def direction_hints(self, x, normal, offset, tol=EPS):
        return np.zeros((0, self.dim))

    def ray_boundary(self, c, w, iters=80):
        """Exit parameter ``t`` of the ray ``c + t w`` (bisection on membership)."""
        lo, hi = 0.0, 1.0
        while self.contains(c + hi * w, 0.0)[0]:
            hi *= 2
            if hi > 1e6:
                raise GeometryError("unbounded ray")
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            if self.contains(c + mid * w, 0.0)[0]:
                lo = mid
            else:
                hi = mid
        return lo

    def project(self, x, tol=1e-6):
        """Move a point within ``tol`` of the boundary onto it along the ray from the interior."""
        x = np.asarray(x, dtype=float)
        gap = self.boundary_gap(x)
        if abs(gap) <= EPS:
            return x
        if abs(gap) > tol:
            raise GeometryError(f"point is not near the boundary (gap {gap:.3e})")
        c = self.interior_point()
        w = x - c
        return c + self.ray_boundary(c, w) * w


class KleinBall(ConvexBody):
    """Euclidean ball ``|y - c| <= r`` inside the Klein ball (a hyperbolic ball if ``c = 0``)."""

    kind = "ball"

    def __init__(self, radius=0.8, center=None, dim=3):
        self.dim = dim
        self.radius = float(radius)
        self.center = np.zeros(dim) if center is None else np.asarray(center, dtype=float)

    def contains(self, Y, tol=EPS):
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        return np.linalg.norm(Y - self.center, axis=1) <= self.radius + tol

    def boundary_gap(self, x):
        return float(np.linalg.norm(np.asarray(x) - self.center) - self.radius)

    def support(self, x):
        n = np.asarray(x, dtype=float) - self.center
        n = n / np.linalg.norm(n)
        return n, float(n @ self.center + self.radius)

    def ray_boundary(self, c, w, iters=None):
        w = np.asarray(w, dtype=float)
        p = np.asarray(c, dtype=float) - self.center
        a, b, cc = w @ w, 2 * p @ w, p @ p - self.radius**2
        return float((-b + np.sqrt(b * b - 4 * a * cc)) / (2 * a))

    def interior_point(self):
        return self.center.copy()

    def diameter(self):
        return 2 * self.radius


class CappedBall(ConvexBody):
    """Ball cut by the half-space ``<n, y> <= h``: a sphere with one flat facet."""

    kind = "capped-ball"

    def __init__(self, radius=0.8, normal=None, height=0.5, dim=3):
        self.dim = dim
        self.radius = float(radius)
        n = np.eye(dim)[-1] if normal is None else np.asarray(normal, dtype=float)
        self.normal = n / np.linalg.norm(n)
        self.height = float(height)
        if not -self.radius < self.height < self.radius:
            raise ValueError("the cutting plane must cross the ball")

    @property
    def rim_radius(self):
        return float(np.sqrt(self.radius**2 - self.height**2))

    def on_facet(self, x, tol=EPS):
        return abs(np.asarray(x) @ self.normal - self.height) <= tol

    def contains(self, Y, tol=EPS):
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        return (np.linalg.norm(Y, axis=1) <= self.radius + tol) & (Y @ self.normal <= self.height + tol)

    def boundary_gap(self, x):
        x = np.asarray(x, dtype=float)
        return float(max(np.linalg.norm(x) - self.radius, x @ self.normal - self.height))

    def support(self, x):
        x = np.asarray(x, dtype=float)
        if x @ self.normal >= self.height - EPS:
            return self.normal.copy(), self.height
        n = x / np.linalg.norm(x)
        return n, self.radius

    def ray_boundary(self, c, w, iters=None):
        ball = KleinBall(self.radius, dim=self.dim).ray_boundary(c, w)
        nw = self.normal @ w
        plane = (self.height - self.normal @ c) / nw if nw > 0 else np.inf
        return float(min(ball, plane))

    def interior_point(self):
        return -0.25 * self.radius * self.normal

    def diameter(self):
        return 2 * self.radius


class Stadium(ConvexBody):
    """Planar union of the square ``[-s, s]^2`` and the half-disk of radius ``s`` on its right side.

    The flat sides ``y = +-s`` continue tangentially into the arc at the
    junction corners ``(s, +-s)``.
    """

    kind = "stadium"
    dim = 2

    def __init__(self, s=0.4):
        self.s = float(s)

    @property
    def junctions(self):
        return np.array([[self.s, self.s], [self.s, -self.s]])

    def contains(self, Y, tol=EPS):
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        s = self.s
        sq = np.max(np.abs(Y), axis=1) <= s + tol
        disk = (Y[:, 0] >= s - tol) & (np.hypot(Y[:, 0] - s, Y[:, 1]) <= s + tol)
        return sq | disk

    def boundary_gap(self, x):
        x = np.asarray(x, dtype=float)
        s = self.s
        q = np.abs(x) - s
        square = np.linalg.norm(np.maximum(q, 0.0)) + min(max(q[0], q[1]), 0.0)
        half_disk = max(np.hypot(x[0] - s, x[1]) - s, s - x[0])
        return float(min(square, half_disk))

    def support(self, x):
        x = np.asarray(x, dtype=float)
        s = self.s
        if x[0] > s + EPS:
            n = np.array([x[0] - s, x[1]])
            n = n / np.linalg.norm(n)
        elif abs(abs(x[1]) - s) <= EPS:
            # flat sides, including both ends of each side
            n = np.array([0.0, np.sign(x[1])])
        else:
            n = np.array([-1.0, 0.0])
        return n, float(n @ x)

    def interior_point(self):
        return np.zeros(2)

    def diameter(self):
        return float(np.hypot(3 * self.s, 2 * self.s))
