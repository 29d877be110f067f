"""Planar (and 1-D) domains described by signed distance functions.

Convention: ``sd(x) < 0`` inside, ``> 0`` outside, ``|sd|`` the Euclidean
distance to the boundary (exactly for balls, intervals, ellipses and
polygons; approximately for user callbacks).
"""

from __future__ import annotations

import numpy as np

__all__ = ["Domain", "Ball", "Interval", "Ellipse", "Polygon", "SdfDomain", "domain_from_json"]


class Domain:
    m: int
    kind = "domain"

    def sd(self, x):
        raise NotImplementedError

    def bbox(self):
        raise NotImplementedError

    def contains(self, x):
        return self.sd(x) < 0

    def gradient(self, x, h=1e-6):
        """Unit outward normal field via central differences of ``sd``."""
        x = np.asarray(x, dtype=float)
        g = np.empty_like(x)
        for i in range(self.m):
            e = np.zeros(self.m)
            e[i] = h
            g[..., i] = (self.sd(x + e) - self.sd(x - e)) / (2 * h)
        n = np.linalg.norm(g, axis=-1, keepdims=True)
        return g / np.where(n > 0, n, 1.0)

    def project(self, x, iters=3):
        """Closest boundary point, by stepping along the sd gradient."""
        x = np.asarray(x, dtype=float)
        for _ in range(iters):
            x = x - self.sd(x)[..., None] * self.gradient(x)
        return x

    def boundary_samples(self, n):
        raise NotImplementedError

    def inradius(self):
        lo, hi = self.bbox()
        g = np.stack(np.meshgrid(*[np.linspace(a, b, 201) for a, b in zip(lo, hi)], indexing="ij"), -1)
        return float(-self.sd(g).min())

    def diameter(self):
        """Bounding-box diagonal, an upper bound for the diameter."""
        lo, hi = self.bbox()
        return float(np.linalg.norm(np.asarray(hi) - np.asarray(lo)))

    def is_convex(self, samples=400):
        """Heuristic convexity test: midpoints of inside pairs stay inside."""
        lo, hi = self.bbox()
        rng = np.random.default_rng(0)
        pts = rng.uniform(lo, hi, size=(4 * samples, self.m))
        pts = pts[self.sd(pts) < 0][:samples]
        if len(pts) < 2:
            return True
        i, j = rng.integers(0, len(pts), size=(2, 4 * samples))
        mid = 0.5 * (pts[i] + pts[j])
        return bool(np.all(self.sd(mid) <= 1e-12))


class Ball(Domain):
    kind = "ball"

    def __init__(self, rho=1.0, center=None, m=2):
        self.m = m
        self.rho = float(rho)
        self.center = np.zeros(m) if center is None else np.asarray(center, dtype=float)

    def sd(self, x):
        x = np.asarray(x, dtype=float)
        return np.linalg.norm(x - self.center, axis=-1) - self.rho

    def bbox(self):
        return self.center - self.rho, self.center + self.rho

    def inradius(self):
        return self.rho

    def boundary_samples(self, n):
        if self.m == 1:
            return np.array([[self.center[0] - self.rho], [self.center[0] + self.rho]])
        t = 2 * np.pi * np.arange(n) / n
        return self.center + self.rho * np.stack([np.cos(t), np.sin(t)], -1)

    def to_json(self):
        return {"type": "ball", "rho": self.rho, "center": self.center.tolist(), "m": self.m}


def Interval(a=-1.0, b=1.0):
    """1-D ball ``(a, b)``."""
    return Ball(0.5 * (b - a), [0.5 * (a + b)], m=1)


class Ellipse(Domain):
    """Axis-aligned ellipse with semi-axes ``a``, ``b``."""

    kind = "ellipse"
    m = 2

    def __init__(self, a, b, center=(0.0, 0.0)):
        self.a = float(a)
        self.b = float(b)
        self.center = np.asarray(center, dtype=float)

    def sd(self, x):
        x = np.asarray(x, dtype=float) - self.center
        swap = self.a < self.b
        a, b = (self.b, self.a) if swap else (self.a, self.b)
        p = np.abs(x[..., 1] if swap else x[..., 0])
        q = np.abs(x[..., 0] if swap else x[..., 1])
        inside = (p / a) ** 2 + (q / b) ** 2 < 1
        # closest point (a^2 p / (t + a^2), b^2 q / (t + b^2)) where t is the
        # unique root of a decreasing function on (-b^2, inf)
        qs = np.maximum(q, 1e-300)
        lo = -b * b + b * qs
        hi = -b * b + np.hypot(a * p, b * qs)
        with np.errstate(divide="ignore", invalid="ignore"):
            for _ in range(100):
                t = 0.5 * (lo + hi)
                F = (a * p / (t + a * a)) ** 2 + (b * qs / (t + b * b)) ** 2 - 1
                lo = np.where(F > 0, t, lo)
                hi = np.where(F > 0, hi, t)
            t = 0.5 * (lo + hi)
            cx = a * a * p / (t + a * a)
            cy = b * b * qs / (t + b * b)
        # points on the major axis inside the evolute
        axis = (q == 0) & (p < (a * a - b * b) / a)
        ax = np.where(axis, a * a * p / (a * a - b * b), 0.0)
        cx = np.where(axis, ax, cx)
        cy = np.where(axis, b * np.sqrt(np.maximum(0.0, 1 - (ax / a) ** 2)), cy)
        d = np.hypot(p - cx, q - cy)
        return np.where(inside, -d, d)

    def bbox(self):
        r = np.array([self.a, self.b])
        return self.center - r, self.center + r

    def inradius(self):
        return min(self.a, self.b)

    def boundary_samples(self, n):
        t = 2 * np.pi * np.arange(n) / n
        return self.center + np.stack([self.a * np.cos(t), self.b * np.sin(t)], -1)

    def to_json(self):
        return {"type": "ellipse", "a": self.a, "b": self.b, "center": self.center.tolist()}


class Polygon(Domain):
    """Simple polygon given by its vertices (either orientation)."""

    kind = "polygon"
    m = 2

    def __init__(self, vertices):
        self.vertices = np.asarray(vertices, dtype=float)
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 2 or len(self.vertices) < 3:
            raise ValueError("polygon needs at least 3 planar vertices")

    def sd(self, x):
        x = np.asarray(x, dtype=float)
        V = self.vertices
        W = np.roll(V, -1, axis=0)
        d2 = np.full(x.shape[:-1], np.inf)
        inside = np.zeros(x.shape[:-1], dtype=bool)
        for a, b in zip(V, W):
            e = b - a
            w = x - a
            t = np.clip((w @ e) / (e @ e), 0.0, 1.0)
            d2 = np.minimum(d2, np.sum((w - t[..., None] * e) ** 2, axis=-1))
            # even-odd crossing rule
            c1 = (a[1] > x[..., 1]) != (b[1] > x[..., 1])
            with np.errstate(divide="ignore", invalid="ignore"):
                xc = a[0] + (x[..., 1] - a[1]) * e[0] / e[1]
            inside ^= c1 & (x[..., 0] < xc)
        d = np.sqrt(d2)
        return np.where(inside, -d, d)

    def bbox(self):
        return self.vertices.min(0), self.vertices.max(0)

    def boundary_samples(self, n):
        V = self.vertices
        W = np.roll(V, -1, axis=0)
        L = np.linalg.norm(W - V, axis=1)
        s = np.arange(n) / n * L.sum()
        cum = np.concatenate([[0], np.cumsum(L)])
        k = np.searchsorted(cum, s, side="right") - 1
        t = (s - cum[k]) / L[k]
        return V[k] + t[:, None] * (W[k] - V[k])

    def to_json(self):
        return {"type": "polygon", "vertices": self.vertices.tolist()}


class SdfDomain(Domain):
    """Domain given by a user signed-distance callback and a bounding box."""

    kind = "sdf"

    def __init__(self, fn, lo, hi, m=2):
        self.fn = fn
        self.m = m
        self.lo = np.asarray(lo, dtype=float)
        self.hi = np.asarray(hi, dtype=float)

    def sd(self, x):
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)

    def bbox(self):
        return self.lo, self.hi

    def boundary_samples(self, n):
        t = 2 * np.pi * np.arange(n) / n
        c = 0.5 * (self.lo + self.hi)
        R = np.linalg.norm(self.hi - self.lo)
        d = np.stack([np.cos(t), np.sin(t)], -1)
        # bisection along rays from the box center (star-shaped domains)
        lo = np.zeros(n)
        hi = np.full(n, R)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            out = self.sd(c + mid[:, None] * d) > 0
            hi = np.where(out, mid, hi)
            lo = np.where(out, lo, mid)
        return c + (0.5 * (lo + hi))[:, None] * d


def domain_from_json(obj):
    t = obj.get("type")
    if t == "ball":
        return Ball(obj.get("rho", 1.0), obj.get("center"), obj.get("m", 2))
    if t == "interval":
        return Interval(obj.get("a", -1.0), obj.get("b", 1.0))
    if t == "ellipse":
        return Ellipse(obj["a"], obj["b"], obj.get("center", (0.0, 0.0)))
    if t == "polygon":
        return Polygon(obj["vertices"])
    raise ValueError(f"unknown domain type {t!r}")
