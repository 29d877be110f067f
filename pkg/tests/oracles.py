"""Independent reference computations used by the tests.

Nothing here calls into the package: curvature functions are evaluated
from explicit elementary symmetric sums, Hessians on quadrics come from
second differences along explicit geodesics, face lattices from exact
rational enumeration plus linear programming, and distances to polygons
from segment geometry.
"""

from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
from scipy.optimize import linprog

# -- curvature functions --------------------------------------------------------


def esym(lam, k):
    lam = np.asarray(lam, dtype=float)
    if k == 0:
        return 1.0
    return float(sum(np.prod(c) for c in combinations(lam, k)))


def K_ref(lam, k, m, l=0):
    """Normalized ``(sigma_k / sigma_l)^(1/(k-l))``."""
    r = esym(lam, k) / esym(lam, l) * comb(m, l) / comb(m, k)
    return r ** (1.0 / (k - l))


def fd_gradient(f, x, rel=1e-4):
    """Richardson-extrapolated central differences."""
    x = np.asarray(x, dtype=float)
    g = np.empty(len(x))
    for i in range(len(x)):
        h = rel * x[i]
        e = np.zeros_like(x)
        e[i] = 1.0

        def d(s):
            return (f(x + s * e) - f(x - s * e)) / (2 * s)

        g[i] = (4 * d(h / 2) - d(h)) / 3
    return g


def matrix_form_fd(Kfun, lam, M, rel=1e-3):
    """``d^2/dt^2 K(eig(diag(lam) + t M))`` at ``t = 0``, Richardson-extrapolated."""
    A = np.diag(lam)
    t = rel * min(lam) / max(1.0, np.abs(M).max())

    def K(B):
        return Kfun(np.linalg.eigvalsh(B))

    def d2(s):
        return (K(A + s * M) - 2 * K(A) + K(A - s * M)) / s**2

    return (4 * d2(t / 2) - d2(t)) / 3


# -- Minkowski geometry -----------------------------------------------------------


def eta_inner(u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return float(np.sum(u[:-1] * v[:-1]) - u[-1] * v[-1])


def tangent_frame(p, quadric):
    """Orthonormal tangent vectors at ``p`` on ``<x,x> = quadric`` with their signs."""
    n = len(p)
    basis = []
    signs = []
    for v in np.eye(n):
        w = v - quadric * eta_inner(v, p) * p  # remove the normal component (|p|^2 = quadric)
        for b, s in zip(basis, signs):
            w = w - s * eta_inner(w, b) * b
        q = eta_inner(w, w)
        if abs(q) > 1e-8:
            basis.append(w / np.sqrt(abs(q)))
            signs.append(np.sign(q))
        if len(basis) == n - 1:
            break
    return np.array(basis), np.array(signs)


def geodesic_point(p, w, s, quadric, sign):
    """Unit-speed geodesic on the hyperboloid (quadric -1) or de Sitter space (quadric +1)."""
    if quadric == -1:
        return np.cosh(s) * p + np.sinh(s) * w
    if sign > 0:
        return np.cos(s) * p + np.sin(s) * w
    return np.cosh(s) * p + np.sinh(s) * w


def quadric_hessian(phi, p, quadric, h=1e-3):
    """Hessian of ``phi`` restricted to the quadric in an orthonormal frame, by geodesic differences."""
    W, signs = tangent_frame(p, quadric)
    k = len(W)
    H = np.empty((k, k))
    f0 = phi(p)
    for i in range(k):
        fp = phi(geodesic_point(p, W[i], h, quadric, signs[i]))
        fm = phi(geodesic_point(p, W[i], -h, quadric, signs[i]))
        H[i, i] = (fp - 2 * f0 + fm) / h**2
    for i in range(k):
        for j in range(i + 1, k):
            # polarization on the unit (or null-safe) combination direction
            v = W[i] + W[j]
            q = eta_inner(v, v)
            if abs(q) < 1e-8:
                v = W[i] + 2 * W[j]
                q = eta_inner(v, v)
                a, b = 1.0, 2.0
            else:
                a, b = 1.0, 1.0
            vs = v / np.sqrt(abs(q))
            sg = np.sign(q)
            fp = phi(geodesic_point(p, vs, h, quadric, sg))
            fm = phi(geodesic_point(p, vs, -h, quadric, sg))
            dvv = (fp - 2 * f0 + fm) / h**2 * abs(q)
            H[i, j] = H[j, i] = (dvv - a * a * H[i, i] - b * b * H[j, j]) / (2 * a * b)
    return H, signs


# -- plateau oracle ---------------------------------------------------------------


def cap_height(X, kappa, rho=1.0):
    R = rho / np.sqrt(1 - kappa**2)
    a = kappa * R
    with np.errstate(invalid="ignore"):
        return np.sqrt(R * R - np.sum(np.asarray(X) ** 2, axis=-1)) - a


# -- exact face enumeration ------------------------------------------------------


def _integer_coords(P):
    """Exact integer coordinates ``P * 2^k`` (every double is a dyadic rational)."""
    F = [[Fraction(float(v)) for v in row] for row in P]
    den = 1
    for row in F:
        for v in row:
            den = max(den, v.denominator)
    return [[int(v * den) for v in row] for row in F]


def _normal(rows):
    """Integer normal of the hyperplane through ``d`` integer points in R^d (d = 2, 3)."""
    a = rows[0]
    if len(a) == 2:
        b = rows[1]
        return [a[1] - b[1], b[0] - a[0]]
    u = [x - y for x, y in zip(rows[1], a)]
    v = [x - y for x, y in zip(rows[2], a)]
    return [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]


def _on_line(Z, i, j):
    a, b = Z[i], Z[j]
    d = [y - x for x, y in zip(a, b)]
    out = []
    for k, q in enumerate(Z):
        w = [y - x for x, y in zip(a, q)]
        cross = [d[1] * w[2] - d[2] * w[1], d[2] * w[0] - d[0] * w[2], d[0] * w[1] - d[1] * w[0]]
        if not any(cross):
            out.append(k)
    return frozenset(out)


def _exposed(P, S):
    """LP: is ``S`` cut out exactly by a supporting hyperplane?"""
    d = P.shape[1]
    inside = sorted(S)
    out = [j for j in range(len(P)) if j not in S]
    p0 = P[inside[0]]
    # variables n (d), s ; maximize s
    c = np.zeros(d + 1)
    c[-1] = -1.0
    A_ub = np.hstack([P[out] - p0, np.ones((len(out), 1))]) if out else None
    b_ub = np.zeros(len(out)) if out else None
    A_eq = np.hstack([P[inside[1:]] - p0, np.zeros((len(inside) - 1, 1))]) if len(inside) > 1 else None
    b_eq = np.zeros(len(inside) - 1) if len(inside) > 1 else None
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=[(-1, 1)] * d + [(None, 1)], method="highs")
    return res.status == 0 and -res.fun > 1e-9


def brute_force_faces(P):
    """All proper non-empty faces of ``Hull(P)`` (dimension 2 or 3) as frozensets of point indices.

    Facets: exact supporting hyperplanes through every affinely independent
    ``d``-subset, in integer arithmetic.  Lower faces: the points on the
    affine hull of each vertex or vertex pair, kept when a linear program
    finds a hyperplane exposing exactly that set.
    """
    P = np.asarray(P, dtype=float)
    n, d = P.shape
    Z = _integer_coords(P)
    faces = set()
    for T in combinations(range(n), d):
        nrm = _normal([Z[i] for i in T])
        if not any(nrm):
            continue
        b = sum(x * y for x, y in zip(nrm, Z[T[0]]))
        vals = [sum(x * y for x, y in zip(nrm, q)) - b for q in Z]
        if all(v <= 0 for v in vals) or all(v >= 0 for v in vals):
            faces.add(frozenset(k for k, v in enumerate(vals) if v == 0))
    candidates = {frozenset([i]) for i in range(n)}
    if d == 3:
        candidates |= {_on_line(Z, i, j) for i, j in combinations(range(n), 2)}
    for S in candidates:
        if S not in faces and _exposed(P, S):
            faces.add(S)
    return faces


def lp_extreme_points(P):
    """Indices of extreme points: ``p_i`` is extreme iff it is not a convex combination of the others."""
    P = np.asarray(P, dtype=float)
    n = len(P)
    out = []
    for i in range(n):
        others = np.delete(np.arange(n), i)
        A_eq = np.vstack([P[others].T, np.ones(n - 1)])
        b_eq = np.concatenate([P[i], [1.0]])
        res = linprog(np.zeros(n - 1), A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * (n - 1), method="highs")
        if res.status != 0:
            out.append(i)
    return out


# -- planar polygons ---------------------------------------------------------------


def polygon_distance(V, X):
    """Distance from points to a closed simple polygon region (0 inside)."""
    V = np.asarray(V, dtype=float)
    X = np.atleast_2d(X)
    A = V
    B = np.roll(V, -1, axis=0)
    d = np.full(len(X), np.inf)
    for a, b in zip(A, B):
        ab = b - a
        t = np.clip(((X - a) @ ab) / (ab @ ab), 0, 1)
        d = np.minimum(d, np.linalg.norm(X - (a + t[:, None] * ab), axis=1))
    inside = np.zeros(len(X), dtype=bool)
    for a, b in zip(A, B):
        cond = (a[1] > X[:, 1]) != (b[1] > X[:, 1])
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = a[0] + (X[:, 1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
        inside ^= cond & (X[:, 0] < xint)
    return np.where(inside, 0.0, d)


def ebc_brute_force(V, x, radii, directions=3600):
    """Best ``dist(c, polygon) - r`` over ball centres ``c = x + r w`` on a fine circle, per radius."""
    t = 2 * np.pi * np.arange(directions) / directions
    W = np.stack([np.cos(t), np.sin(t)], -1)
    return [float((polygon_distance(V, np.asarray(x) + r * W) - r).max()) for r in radii]
