"""Minkowski space R^{m+1,1}, its hyperboloid and de Sitter quadrics, and chart maps.

Conventions
-----------
* ``<u, v> = sum_{i <= m+1} u_i v_i - u_{m+2} v_{m+2}``; the time coordinate is last.
* Klein chart: ``y = x[:m+1] / x[m+2]``.
* Upper half-space chart ``(z, t)``, ``z in R^m``, ``t > 0``::

      x' = z / t
      x_{m+1} = (|z|^2 + t^2 - 1) / (2 t)
      x_{m+2} = (|z|^2 + t^2 + 1) / (2 t)

  so the base point ``o = (0, ..., 0, 1)`` corresponds to ``(0, ..., 0, 1)``
  and the horizontal hyperplane ``t = c`` is the horosphere
  ``<x, n> = -1/c`` with null vector ``n = e_{m+1} - e_{m+2}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IdealPointError, SignatureError

QUADRIC_TOL = 1e-10

__all__ = [
    "mink_inner",
    "mink_norm2",
    "base_point",
    "HPoint",
    "DSPoint",
    "KleinPoint",
    "UhsPoint",
    "UmbilicSphere",
    "to_klein",
    "from_klein",
    "to_uhs",
    "from_uhs",
    "hyperboloid_to_klein",
    "klein_to_hyperboloid",
    "hyperboloid_to_uhs",
    "uhs_to_hyperboloid",
    "uhs_to_hyperboloid_jacobian",
    "hyperbolic_distance",
    "uhs_distance",
    "umbilic_cap",
    "geodesic",
]


def mink_inner(u, v):
    """Lorentzian inner product along the last axis."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.sum(u[..., :-1] * v[..., :-1], axis=-1) - u[..., -1] * v[..., -1]


def mink_norm2(u):
    return mink_inner(u, u)


def base_point(m):
    """The point ``o = (0, ..., 0, 1)`` of the hyperboloid in R^{m+1,1}."""
    o = np.zeros(m + 2)
    o[-1] = 1.0
    return o


# -- array-level chart maps ---------------------------------------------------


def hyperboloid_to_klein(x):
    x = np.asarray(x, dtype=float)
    return x[..., :-1] / x[..., -1:]


def klein_to_hyperboloid(y):
    y = np.asarray(y, dtype=float)
    r2 = np.sum(y * y, axis=-1, keepdims=True)
    if np.any(r2 >= 1.0):
        raise IdealPointError("Klein points must satisfy |y| < 1 to lift to the hyperboloid")
    w = 1.0 / np.sqrt(1.0 - r2)
    return np.concatenate([y * w, w], axis=-1)


def uhs_to_hyperboloid(p):
    """Map UHS points ``(z_1, ..., z_m, t)`` to the hyperboloid."""
    p = np.asarray(p, dtype=float)
    z, t = p[..., :-1], p[..., -1:]
    if np.any(t <= 0):
        raise DomainError("upper half-space points need positive last coordinate")
    r2 = np.sum(z * z, axis=-1, keepdims=True)
    return np.concatenate([z / t, (r2 + t * t - 1.0) / (2 * t), (r2 + t * t + 1.0) / (2 * t)], axis=-1)


def hyperboloid_to_uhs(x):
    x = np.asarray(x, dtype=float)
    t = 1.0 / (x[..., -1:] - x[..., -2:-1])
    return np.concatenate([x[..., :-2] * t, t], axis=-1)


def uhs_to_hyperboloid_jacobian(p):
    """Jacobian ``d x / d (z, t)``, shape ``(..., m+2, m+1)``."""
    p = np.asarray(p, dtype=float)
    z, t = p[..., :-1], p[..., -1]
    m = z.shape[-1]
    r2 = np.sum(z * z, axis=-1)
    J = np.zeros(p.shape[:-1] + (m + 2, m + 1))
    tt = t[..., None]
    for j in range(m):
        J[..., j, j] = 1.0 / t
    J[..., :m, m] = -z / tt**2
    J[..., m, :m] = z / tt
    J[..., m + 1, :m] = z / tt
    J[..., m, m] = -(r2 - 1.0) / (2 * t**2) + 0.5
    J[..., m + 1, m] = -(r2 + 1.0) / (2 * t**2) + 0.5
    return J


def hyperbolic_distance(p, q):
    c = -mink_inner(p, q)
    return np.arccosh(np.maximum(c, 1.0))


def uhs_distance(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d2 = np.sum((a - b) ** 2, axis=-1)
    return np.arccosh(1.0 + d2 / (2 * a[..., -1] * b[..., -1]))


def geodesic(p, t, s):
    """Unit-speed hyperboloid geodesic ``cosh(s) p + sinh(s) t``."""
    s = np.asarray(s, dtype=float)[..., None]
    return np.cosh(s) * np.asarray(p) + np.sinh(s) * np.asarray(t)


# -- typed points -------------------------------------------------------------


def _renormalize(v, target):
    n2 = mink_norm2(v)
    if abs(n2 - target) > 1e-6 * max(1.0, np.abs(v).max() ** 2):
        raise SignatureError(f"vector has <v,v> = {n2:.3e}, expected {target}")
    return v / np.sqrt(n2 / target)


@dataclass(frozen=True)
class HPoint:
    """Point on the upper sheet of ``<x, x> = -1``; rescaled onto the quadric on construction."""

    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        if v.ndim != 1 or v.size < 3:
            raise DomainError("HPoint needs a 1-D vector of length m+2 >= 3")
        if v[-1] <= 0:
            raise SignatureError("HPoint must lie on the upper sheet (last coordinate > 0)")
        object.__setattr__(self, "v", _renormalize(v, -1.0))

    @property
    def m(self):
        return self.v.size - 2

    def to_klein(self):
        return to_klein(self)

    def to_uhs(self):
        return to_uhs(self)


@dataclass(frozen=True)
class DSPoint:
    """Point of de Sitter space ``<x, x> = 1``."""

    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        if v.ndim != 1 or v.size < 3:
            raise DomainError("DSPoint needs a 1-D vector of length m+2 >= 3")
        object.__setattr__(self, "v", _renormalize(v, 1.0))

    @property
    def m(self):
        return self.v.size - 2


@dataclass(frozen=True)
class KleinPoint:
    """Point of the closed unit ball; ``ideal`` marks points on the unit sphere."""

    y: np.ndarray
    ideal: bool = False

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        r = float(np.linalg.norm(y))
        if r > 1.0 + 1e-12:
            raise DomainError(f"Klein point outside the closed ball (|y| = {r})")
        if self.ideal or abs(r - 1.0) <= 1e-12:
            y = y / r
            object.__setattr__(self, "ideal", True)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class UhsPoint:
    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x[-1] <= 0:
            raise DomainError("upper half-space points need x_{m+1} > 0")
        object.__setattr__(self, "x", x)


def to_klein(p):
    v = p.v if isinstance(p, HPoint) else np.asarray(p, dtype=float)
    return KleinPoint(hyperboloid_to_klein(v))


def from_klein(y):
    if isinstance(y, KleinPoint):
        if y.ideal:
            raise IdealPointError("ideal Klein points have no hyperboloid lift")
        y = y.y
    return HPoint(klein_to_hyperboloid(y))


def to_uhs(p):
    v = p.v if isinstance(p, HPoint) else np.asarray(p, dtype=float)
    return UhsPoint(hyperboloid_to_uhs(v))


def from_uhs(q):
    x = q.x if isinstance(q, UhsPoint) else np.asarray(q, dtype=float)
    return HPoint(uhs_to_hyperboloid(x))


# -- umbilic spheres ----------------------------------------------------------


@dataclass(frozen=True)
class UmbilicSphere:
    """Euclidean sphere in the UHS model meeting the ideal boundary at angle ``theta``.

    ``orientation='down'`` puts the center below the ideal boundary; the part
    above is the graph ``t = sqrt(R^2 - |x - c|^2) - a``, a convex cap with
    shape operator ``sin(theta) Id`` for the downward normal.
    ``orientation='up'`` puts the center above, giving the bulb whose lower
    sheet ``t = a - sqrt(R^2 - |x - c|^2)`` meets the boundary at the same angle.
    """

    center: np.ndarray
    radius: float
    orientation: str
    rho: float
    kappa: float

    @property
    def height(self):
        return float(self.center[-1])

    @property
    def a(self):
        return abs(self.height)

    @property
    def theta(self):
        return float(np.arcsin(self.a / self.radius))

    def graph(self, x):
        """Height of the relevant sheet over base points ``x`` (NaN off the disk)."""
        x = np.asarray(x, dtype=float)
        c = self.center[:-1]
        r2 = np.sum((x - c) ** 2, axis=-1)
        with np.errstate(invalid="ignore"):
            root = np.sqrt(self.radius**2 - r2)
        if self.orientation == "down":
            return root - self.a
        return self.a - root

    def param(self, w):
        """Hyperboloid parametrization over base coordinates (for the down cap)."""
        x = np.asarray(w, dtype=float)
        t = self.graph(x)
        return uhs_to_hyperboloid(np.concatenate([x, np.asarray(t)[..., None]], axis=-1))


def umbilic_cap(rho, kappa, orientation="down", center=None, m=2):
    """Umbilic sphere meeting R^m in the sphere of radius ``rho`` at angle ``arcsin(kappa)``."""
    if not 0.0 < kappa < 1.0:
        raise DomainError(f"kappa must lie in (0, 1), got {kappa}")
    if rho <= 0:
        raise DomainError("rho must be positive")
    if orientation not in ("down", "up"):
        raise ValueError("orientation must be 'down' or 'up'")
    s = np.sqrt(1.0 - kappa * kappa)
    R = rho / s
    a = kappa * rho / s
    c = np.zeros(m + 1)
    if center is not None:
        c[:-1] = np.asarray(center, dtype=float)
    c[-1] = -a if orientation == "down" else a
    return UmbilicSphere(c, float(R), orientation, float(rho), float(kappa))
