"""Cartesian grids and Shortley-Weller style stencils on offset domains."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ARMS = {
    1: np.array([[1], [-1]]),
    2: np.array([[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, -1], [1, -1], [-1, 1]]),
}


@dataclass
class Grid:
    """Uniform grid with ``n`` nodes per axis over the domain's bounding box."""

    lo: np.ndarray
    h: float
    n: int
    m: int

    @classmethod
    def over(cls, domain, n):
        lo, hi = domain.bbox()
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        h = float(np.max(hi - lo)) / (n - 1)
        return cls(lo, h, n, domain.m)

    @property
    def shape(self):
        return (self.n,) * self.m

    def coords(self):
        axes = [self.lo[i] + self.h * np.arange(self.n) for i in range(self.m)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), -1)

    def multi_index(self):
        return np.stack(np.meshgrid(*[np.arange(self.n)] * self.m, indexing="ij"), -1)


@dataclass
class Stencil:
    """Unknowns of one exhaustion level and their arms.

    ``nbr[k, a]`` is the unknown index reached along arm ``a`` or ``-1``
    when the arm is cut by the level boundary at fraction ``s[k, a]``.
    """

    grid: Grid
    delta: float
    bval: float
    flat: np.ndarray
    index: np.ndarray
    coords: np.ndarray
    sd: np.ndarray
    nbr: np.ndarray
    s: np.ndarray

    @property
    def N(self):
        return len(self.flat)

    @property
    def h(self):
        return self.grid.h

    @property
    def m(self):
        return self.grid.m

    def colors(self):
        """Graph coloring for the Jacobian: nodes of a color never share a stencil."""
        w = 3 ** np.arange(self.m)
        return (self.index % 3) @ w

    def to_grid(self, u, fill=np.nan):
        out = np.full(self.grid.n**self.m, fill)
        out[self.flat] = u
        return out.reshape(self.grid.shape)

    def boundary_ring(self):
        """Unknowns with at least one cut arm."""
        return np.any(self.nbr < 0, axis=1)


def build_stencil(domain, grid, delta, bval, s_min=1e-6):
    """Unknowns ``{sd < -delta}`` with arm fractions found by bisection."""
    X = grid.coords().reshape(-1, grid.m)
    sd_all = domain.sd(X)
    inside = sd_all < -delta
    flat = np.nonzero(inside)[0]
    if len(flat) == 0:
        raise ValueError("exhaustion level contains no grid nodes")
    lookup = np.full(X.shape[0], -1, dtype=np.int64)
    lookup[flat] = np.arange(len(flat))
    mi = grid.multi_index().reshape(-1, grid.m)[flat]
    arms = ARMS[grid.m]
    N, A = len(flat), len(arms)
    nbr = np.full((N, A), -1, dtype=np.int64)
    s = np.ones((N, A))
    strides = grid.n ** np.arange(grid.m)[::-1]
    x0 = X[flat]
    for a, d in enumerate(arms):
        j = mi + d
        ok = np.all((j >= 0) & (j < grid.n), axis=1)
        nb = np.full(N, -1, dtype=np.int64)
        nb[ok] = lookup[j[ok] @ strides]
        nbr[:, a] = nb
        cut = nb < 0
        if np.any(cut):
            lo = np.zeros(cut.sum())
            hi = np.ones(cut.sum())
            xc = x0[cut]
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                out = domain.sd(xc + (mid * grid.h)[:, None] * d) >= -delta
                hi = np.where(out, mid, hi)
                lo = np.where(out, lo, mid)
            s[cut, a] = np.maximum(0.5 * (lo + hi), s_min)
    return Stencil(grid, float(delta), float(bval), flat, mi, x0, sd_all[flat], nbr, s)
