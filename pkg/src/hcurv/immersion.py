"""Sampled immersions into hyperbolic and de Sitter space.

An immersion is a vectorized callback ``e(u)`` from a chart box ``U`` in
R^m to R^{m+1,1} taking values on the quadric ``<x, x> = q`` (``q = -1``
for the hyperboloid, ``q = +1`` for de Sitter space).  All geometry is
obtained by central finite differences with optional Richardson
extrapolation, using the Lorentzian inner product for every contraction.

Sign conventions: ``II_ij = -<e_ij, nu>``, ``A = I^{-1} II`` and the unit
normal is oriented so that ``tr A >= 0`` unless an orientation is fixed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.linalg import eigh

from .errors import DomainError, EigenbasisError, NotISCError, RankError
from .minkowski import mink_inner, uhs_to_hyperboloid

__all__ = [
    "ParamImmersion",
    "FrameData",
    "frame_at",
    "k_curvature",
    "gauss_dual",
    "dual_frame",
    "k_laplacian",
    "log_rule_residual",
    "hessian_restriction_residual",
    "ambient_hessian",
    "principal_derivatives",
    "codazzi_residual",
    "simons_residual",
    "graph_immersion",
    "cap_immersion",
]

DEFAULT_H = 1e-3
GAP_UMBILIC = 1e-8
GAP_UNSTABLE = 1e-4


def _eta(n):
    d = np.ones(n)
    d[-1] = -1.0
    return d


class ParamImmersion:
    """Immersion ``e: U -> Q`` given by a vectorized callback.

    Parameters
    ----------
    func : callable
        Maps an array of chart points ``(..., m)`` to ``(..., m+2)``.
        Scalar-only callbacks are wrapped automatically.
    m : int
        Chart dimension.
    lo, hi : array_like
        Corners of the chart box.
    quadric : {-1, 1}
        ``-1`` for the hyperboloid, ``+1`` for de Sitter space.
    orientation : {'auto', 1, -1}
        Multiplier on the cofactor normal, or ``'auto'`` to choose
        ``tr A >= 0`` at every query point.
    """

    def __init__(self, func, m, lo=None, hi=None, quadric=-1, orientation="auto", name="immersion"):
        if m not in (1, 2, 3):
            raise ValueError("chart dimension m must be 1, 2 or 3")
        if quadric not in (-1, 1):
            raise ValueError("quadric must be -1 or +1")
        self.m = m
        self.lo = np.full(m, -np.inf) if lo is None else np.asarray(lo, dtype=float).reshape(m)
        self.hi = np.full(m, np.inf) if hi is None else np.asarray(hi, dtype=float).reshape(m)
        self.quadric = quadric
        self.orientation = orientation
        self.name = name
        self._func = self._vectorize(func)

    def _vectorize(self, func):
        probe = np.zeros((2, self.m))
        probe[:] = np.where(np.isfinite(self.lo), 0.5 * (self.lo + self.hi), 0.0)
        try:
            out = np.asarray(func(probe))
            if out.shape == (2, self.m + 2):
                return func
        except Exception:
            pass

        def wrapped(u):
            u = np.asarray(u, dtype=float)
            flat = u.reshape(-1, self.m)
            vals = np.array([func(p) for p in flat])
            return vals.reshape(u.shape[:-1] + (self.m + 2,))

        return wrapped

    def __call__(self, u):
        return self._func(np.asarray(u, dtype=float))

    def check_margin(self, u0, h):
        u0 = np.asarray(u0, dtype=float)
        if np.any(u0 - 2 * h < self.lo) or np.any(u0 + 2 * h > self.hi):
            raise DomainError(f"chart point {u0} closer than 2h={2 * h} to the chart boundary")

    # -- finite differences ---------------------------------------------------

    def _raw_derivs(self, u0, h, second=True):
        m = self.m
        I = np.eye(m)
        pts = [u0]
        for i in range(m):
            pts += [u0 + h * I[i], u0 - h * I[i]]
        if second:
            for i in range(m):
                for j in range(i + 1, m):
                    pts += [
                        u0 + h * (I[i] + I[j]),
                        u0 + h * (I[i] - I[j]),
                        u0 - h * (I[i] - I[j]),
                        u0 - h * (I[i] + I[j]),
                    ]
        vals = self(np.array(pts))
        e0 = vals[0]
        d1 = np.empty((m,) + e0.shape)
        d2 = np.empty((m, m) + e0.shape)
        for i in range(m):
            ep, em = vals[1 + 2 * i], vals[2 + 2 * i]
            d1[i] = (ep - em) / (2 * h)
            d2[i, i] = (ep - 2 * e0 + em) / h**2
        if second:
            k = 1 + 2 * m
            for i in range(m):
                for j in range(i + 1, m):
                    pp, pm, mp, mm = vals[k : k + 4]
                    d2[i, j] = d2[j, i] = (pp - pm - mp + mm) / (4 * h * h)
                    k += 4
        return e0, d1, d2

    def derivatives(self, u0, h=DEFAULT_H, levels=2, second=True):
        """Point, first and second partials at ``u0``.

        ``levels=2`` applies one Richardson step, cancelling the ``h^2`` term.
        """
        u0 = np.asarray(u0, dtype=float)
        e0, d1, d2 = self._raw_derivs(u0, h, second)
        if levels >= 2:
            _, d1b, d2b = self._raw_derivs(u0, h / 2, second)
            d1 = (4 * d1b - d1) / 3
            d2 = (4 * d2b - d2) / 3
        return e0, d1, d2

    def cofactor_normal(self, e0, d1):
        """Unnormalized normal from the Lorentzian generalized cross product."""
        eta = _eta(self.m + 2)
        B = np.vstack([e0, d1]) * eta
        n = np.empty(self.m + 2)
        for k in range(self.m + 2):
            n[k] = (-1) ** k * np.linalg.det(np.delete(B, k, axis=1))
        nn = mink_inner(n, n)
        if abs(nn) < 1e-300:
            raise RankError("degenerate tangent space: normal has zero norm")
        return n / np.sqrt(abs(nn))

    def normal(self, u, h=DEFAULT_H, levels=2, sign=None):
        u = np.asarray(u, dtype=float)
        e0, d1, _ = self.derivatives(u, h, levels, second=False)
        n = self.cofactor_normal(e0, d1)
        if sign is None:
            sign = 1.0 if self.orientation == "auto" else float(self.orientation)
        return sign * n


@dataclass
class FrameData:
    """Pointwise extrinsic geometry of an immersion.

    ``V`` holds I-orthonormal eigenvectors of ``A`` as columns, ordered to
    match ``lam`` (descending).  ``gamma[k, i, j]`` is the Christoffel
    symbol of the induced metric.
    """

    u0: np.ndarray
    point: np.ndarray
    tangents: np.ndarray
    second: np.ndarray
    normal: np.ndarray
    I: np.ndarray
    II: np.ndarray
    III: np.ndarray
    A: np.ndarray
    lam: np.ndarray
    V: np.ndarray
    gamma: np.ndarray
    sign: float
    quadric: int

    @property
    def m(self):
        return len(self.lam)

    @property
    def normal_norm2(self):
        return -self.quadric

    def consistency(self):
        """Residuals of the internal identities (A = I^-1 II, III = A^T I A, orthogonality)."""
        r_A = np.abs(self.I @ self.A - self.II).max()
        r_III = np.abs(self.A.T @ self.I @ self.A - self.III).max()
        nn = abs(mink_inner(self.normal, self.normal) - self.normal_norm2)
        ne = abs(mink_inner(self.normal, self.point))
        nt = np.abs(mink_inner(self.tangents, self.normal)).max()
        return {"A": float(r_A), "III": float(r_III), "nu_norm": float(nn), "nu_point": float(ne), "nu_tangent": float(nt)}


def _sorted_eig(II, I):
    w, V = eigh(II, I)
    return w[::-1].copy(), V[:, ::-1].copy()


def _geometry(e, u0, h, levels, sign=None):
    e0, d1, d2 = e.derivatives(u0, h, levels)
    eta = _eta(e.m + 2)
    I = (d1 * eta) @ d1.T
    scale = max(1.0, np.abs(I).max())
    if abs(np.linalg.det(I)) < 1e-14 * scale**e.m:
        raise RankError(f"first fundamental form is singular at {u0}")
    n = e.cofactor_normal(e0, d1)
    II = -mink_inner(d2, n)
    if sign is None:
        if e.orientation == "auto":
            sign = 1.0 if np.trace(np.linalg.solve(I, II)) >= 0 else -1.0
        else:
            sign = float(e.orientation)
    n = sign * n
    II = sign * II
    II = 0.5 * (II + II.T)
    Iinv = np.linalg.inv(I)
    # Gamma^k_ij = I^{kl} <e_ij, e_l>
    g_low = np.einsum("ijn,ln->lij", d2 * eta, d1)
    gamma = np.einsum("kl,lij->kij", Iinv, g_low)
    return e0, d1, d2, n, I, II, gamma, sign


def frame_at(e, u0, h=DEFAULT_H, levels=2, sign=None):
    """Fundamental forms, shape operator and principal frame at ``u0``."""
    u0 = np.asarray(u0, dtype=float).reshape(e.m)
    e.check_margin(u0, h)
    e0, d1, d2, n, I, II, gamma, sign = _geometry(e, u0, h, levels, sign)
    A = np.linalg.solve(I, II)
    lam, V = _sorted_eig(II, I)
    # III_ij = <nu_i, nu_j> from differences of the (fixed-sign) normal field
    dn = np.empty((e.m, e.m + 2))
    for i in range(e.m):
        step = np.zeros(e.m)
        step[i] = h
        dn[i] = (e.normal(u0 + step, h, levels, sign) - e.normal(u0 - step, h, levels, sign)) / (2 * h)
        if levels >= 2:
            dnb = (e.normal(u0 + step / 2, h, levels, sign) - e.normal(u0 - step / 2, h, levels, sign)) / h
            dn[i] = (4 * dnb - dn[i]) / 3
    III = (dn * _eta(e.m + 2)) @ dn.T
    III = 0.5 * (III + III.T)
    return FrameData(u0, e0, d1, d2, n, I, II, III, A, lam, V, gamma, sign, e.quadric)


def k_curvature(e, spec, u0, h=DEFAULT_H, levels=2, boundary_tol=1e-8):
    """K-curvature ``K(lam)`` at ``u0``; raises ``NotISCError`` off the positive cone."""
    fr = frame_at(e, u0, h, levels)
    lam = fr.lam
    if np.all(lam > 0):
        return float(spec(lam))
    if getattr(spec, "allows_boundary", False) and np.all(lam > -boundary_tol):
        return float(spec(np.maximum(lam, 0.0)))
    raise NotISCError(f"principal curvatures {lam} leave the positive cone at {u0}")


class DualImmersion(ParamImmersion):
    """The unit normal field of ``e`` viewed as an immersion into de Sitter space."""

    def __init__(self, base, sign, inner_h, inner_levels):
        self.base = base
        self.sign = sign
        self.inner_h = inner_h
        self.inner_levels = inner_levels

        def func(u):
            u = np.asarray(u, dtype=float)
            flat = u.reshape(-1, base.m)
            out = np.array([base.normal(p, inner_h, inner_levels, sign) for p in flat])
            return out.reshape(u.shape[:-1] + (base.m + 2,))

        super().__init__(func, base.m, base.lo, base.hi, quadric=-base.quadric, orientation="auto", name=f"dual({base.name})")

    def check_margin(self, u0, h):
        self.base.check_margin(u0, h + self.inner_h)


def gauss_dual(e, u_ref=None, inner_h=1e-2, inner_levels=2):
    """Dual immersion ``e_hat = nu``, with the normal sign fixed at ``u_ref``.

    Raises ``NotISCError`` if ``e`` is not strictly convex at ``u_ref``,
    since the dual then fails to be an immersion.
    """
    if u_ref is None:
        u_ref = np.where(np.isfinite(e.lo), 0.5 * (e.lo + e.hi), 0.0)
    fr = frame_at(e, u_ref, min(DEFAULT_H, inner_h), 2)
    if np.any(fr.lam <= 0):
        raise NotISCError("Gauss dual requires an ISC immersion")
    return DualImmersion(e, fr.sign, inner_h, inner_levels)


def dual_frame(e, u0, h=5e-3, levels=2, u_ref=None, inner_h=5e-3):
    """Frame of the Gauss dual at ``u0`` (defaults tuned for the nested differences)."""
    return frame_at(gauss_dual(e, u_ref if u_ref is not None else u0, inner_h=inner_h), u0, h, levels)


# -- K-laplacian ----------------------------------------------------------------


def _chart_derivs(phi, u0, h, levels=2):
    """Gradient and Hessian of a scalar chart function by central differences."""
    scalar = ParamImmersion.__new__(ParamImmersion)
    scalar.m = len(u0)
    scalar._func = lambda u: np.asarray(phi(u), dtype=float)[..., None]
    v0, d1, d2 = scalar.derivatives(u0, h, levels)
    return float(v0[0]), d1[:, 0], d2[:, :, 0]


def intrinsic_hessian(fr, grad, hess):
    """Covariant Hessian ``d_ij phi - Gamma^k_ij d_k phi`` in chart coordinates."""
    return hess - np.einsum("kij,k->ij", fr.gamma, grad)


def k_laplacian(e, spec, phi, u0, h=DEFAULT_H, levels=2, frame=None, return_parts=False):
    """``sum_k mu_k Hess(phi)(v_k, v_k)`` in the I-orthonormal principal frame."""
    u0 = np.asarray(u0, dtype=float).reshape(e.m)
    fr = frame if frame is not None else frame_at(e, u0, h, levels)
    if np.any(fr.lam <= 0):
        raise NotISCError("K-laplacian needs positive principal curvatures")
    _, mu, _ = spec.gradient(fr.lam)
    val, grad, hess = _chart_derivs(phi, u0, h, levels)
    H = intrinsic_hessian(fr, grad, hess)
    Hkk = np.einsum("ik,ij,jk->k", fr.V, H, fr.V)
    out = float(np.dot(mu, Hkk))
    if return_parts:
        return out, {"mu": mu, "phi": val, "phi_k": fr.V.T @ grad, "hess_kk": Hkk, "frame": fr}
    return out


def log_rule_residual(e, spec, phi, u0, h=DEFAULT_H, levels=2):
    """``|Lap^K log phi - Lap^K phi / phi + sum mu_k phi_k^2 / phi^2|``."""
    u0 = np.asarray(u0, dtype=float).reshape(e.m)
    if phi(u0[None])[0] <= 0:
        raise DomainError("log rule needs a positive function")
    fr = frame_at(e, u0, h, levels)
    lap, parts = k_laplacian(e, spec, phi, u0, h, levels, frame=fr, return_parts=True)
    lap_log = k_laplacian(e, spec, lambda u: np.log(phi(u)), u0, h, levels, frame=fr)
    p = parts["phi"]
    rhs = lap / p - np.sum(parts["mu"] * parts["phi_k"] ** 2) / p**2
    return abs(lap_log - rhs)


# -- Hessian restriction ------------------------------------------------------


def quadric_geodesic(p, w, s, quadric):
    """Geodesic of the quadric ``<x,x> = quadric`` with ``gamma(0)=p``, ``gamma'(0)=w``."""
    c = -mink_inner(w, w) / quadric
    s = np.asarray(s, dtype=float)[..., None]
    if c > 0:
        r = np.sqrt(c)
        return np.cosh(r * s) * p + np.sinh(r * s) / r * w
    if c < 0:
        r = np.sqrt(-c)
        return np.cos(r * s) * p + np.sin(r * s) / r * w
    return p + s * w


def ambient_hessian(phi, p, W, quadric, h=DEFAULT_H):
    """Hessian of an ambient function on the quadric, on the columns of ``W``.

    Second derivatives along geodesics give the diagonal; polarization gives
    the off-diagonal entries.
    """
    W = np.atleast_2d(np.asarray(W, dtype=float))
    k = W.shape[0]

    def d2(w):
        g = quadric_geodesic(p, w, np.array([-h, 0.0, h, -h / 2, h / 2]), quadric)
        v = np.asarray(phi(g), dtype=float)
        c1 = (v[0] - 2 * v[1] + v[2]) / h**2
        c2 = (v[3] - 2 * v[1] + v[4]) / (h / 2) ** 2
        return (4 * c2 - c1) / 3

    H = np.empty((k, k))
    for i in range(k):
        H[i, i] = d2(W[i])
        for j in range(i):
            H[i, j] = H[j, i] = 0.25 * (d2(W[i] + W[j]) - d2(W[i] - W[j]))
    return H


def ambient_gradient(phi, p, w, quadric, h=DEFAULT_H):
    g = quadric_geodesic(p, w, np.array([-h, h, -h / 2, h / 2]), quadric)
    v = np.asarray(phi(g), dtype=float)
    c1 = (v[1] - v[0]) / (2 * h)
    c2 = (v[3] - v[2]) / h
    return (4 * c2 - c1) / 3


def hessian_restriction_residual(phi, e, u0, h=DEFAULT_H, levels=2, return_parts=False):
    """Max-norm of ``Hess^X(phi o e) - (Hess^Y(phi)|_TX - eps dphi(nu) II)``.

    ``phi`` is an ambient function on R^{m+1,1} (vectorized over the last
    axis).  The intrinsic side uses chart differences with the Christoffel
    correction; the ambient side uses geodesic differences on the quadric.
    """
    u0 = np.asarray(u0, dtype=float).reshape(e.m)
    fr = frame_at(e, u0, h, levels)
    _, grad, hess = _chart_derivs(lambda u: phi(e(u)), u0, h, levels)
    lhs = intrinsic_hessian(fr, grad, hess)
    HY = ambient_hessian(phi, fr.point, fr.tangents, e.quadric, h)
    eps = fr.normal_norm2
    dphi_nu = ambient_gradient(phi, fr.point, fr.normal, e.quadric, h)
    rhs = HY - eps * dphi_nu * fr.II
    res = float(np.abs(lhs - rhs).max())
    if return_parts:
        return res, {"intrinsic": lhs, "ambient": HY, "dphi_nu": dphi_nu, "frame": fr}
    return res


# -- Codazzi and Simons ---------------------------------------------------------


def _ii_gamma_grid(e, u0, h, radius, inner_h, sign):
    m = e.m
    offs = list(product(range(-radius, radius + 1), repeat=m))
    II = {}
    G = {}
    frames = {}
    for o in offs:
        u = u0 + h * np.array(o, dtype=float)
        _, d1, _, _, I, IIo, gamma, _ = _geometry(e, u, inner_h, 2, sign)
        II[o], G[o] = IIo, gamma
        frames[o] = I
    return II, G, frames


def _shift(o, i, d):
    o = list(o)
    o[i] += d
    return tuple(o)


def _nabla_II(II, G, o, h, m):
    """``(nabla_c II)_ab`` at stencil offset ``o``, indexed ``[a, b, c]``."""
    T = np.empty((m, m, m))
    g = G[o]
    ii = II[o]
    for c in range(m):
        dII = (II[_shift(o, c, 1)] - II[_shift(o, c, -1)]) / (2 * h)
        T[:, :, c] = dII - np.einsum("da,db->ab", g[:, c, :], ii) - np.einsum("db,ad->ab", g[:, c, :], ii)
    return T


def _principal_frame(e, u0, inner_h, sign):
    _, _, _, _, I, II, _, sign = _geometry(e, u0, inner_h, 2, sign)
    lam, V = _sorted_eig(II, I)
    return lam, V, sign


def principal_derivatives(e, u0, h, inner_h=1e-2):
    """``(lam, V, T)`` with ``T[i, j, k] = A_ij;k`` in the principal frame at ``u0``."""
    u0 = np.asarray(u0, dtype=float).reshape(e.m)
    e.check_margin(u0, h + inner_h)
    m = e.m
    lam, V, sign = _principal_frame(e, u0, inner_h, None)
    II, G, _ = _ii_gamma_grid(e, u0, h, 1, inner_h, sign)
    T = _nabla_II(II, G, (0,) * m, h, m)
    return lam, V, np.einsum("abc,ai,bj,ck->ijk", T, V, V, V)


def codazzi_residual(e, u0, h, inner_h=1e-2):
    """``max |A_ij;k - A_kj;i|`` in the principal frame at ``u0``."""
    _, _, Tf = principal_derivatives(e, u0, h, inner_h)
    return float(np.abs(Tf - Tf.transpose(2, 1, 0)).max())


def simons_residual(e, u0, h, inner_h=1e-2, c=-1.0):
    """``max |A_ii;jj - A_jj;ii - (lam_i lam_j + c)(lam_i - lam_j)|`` in the principal frame.

    Raises ``EigenbasisError`` when two principal curvatures are close but
    not numerically equal; at an umbilic point every frame is principal.
    """
    u0 = np.asarray(u0, dtype=float).reshape(e.m)
    e.check_margin(u0, 2 * h + inner_h)
    m = e.m
    lam, V, sign = _principal_frame(e, u0, inner_h, None)
    gaps = np.abs(np.diff(lam))
    if np.any((gaps >= GAP_UMBILIC) & (gaps < GAP_UNSTABLE)):
        raise EigenbasisError(f"principal curvatures {lam} are too close for a stable eigenframe")
    II, G, _ = _ii_gamma_grid(e, u0, h, 2, inner_h, sign)
    z = (0,) * m
    Ts = {}
    for o in product(range(-1, 2), repeat=m):
        if sum(abs(x) for x in o) <= 1:
            Ts[o] = _nabla_II(II, G, o, h, m)
    T0 = Ts[z]
    g = G[z]
    # (nabla^2 II)_{ab;c;d}
    N2 = np.empty((m, m, m, m))
    for d in range(m):
        dT = (Ts[_shift(z, d, 1)] - Ts[_shift(z, d, -1)]) / (2 * h)
        N2[..., d] = (
            dT
            - np.einsum("ea,ebc->abc", g[:, d, :], T0)
            - np.einsum("eb,aec->abc", g[:, d, :], T0)
            - np.einsum("ec,abe->abc", g[:, d, :], T0)
        )
    F = np.einsum("abcd,ai,bj,ck,dl->ijkl", N2, V, V, V, V)
    res = 0.0
    for i in range(m):
        for j in range(m):
            lhs = F[i, i, j, j] - F[j, j, i, i]
            rhs = (lam[i] * lam[j] + c) * (lam[i] - lam[j])
            res = max(res, abs(lhs - rhs))
    return float(res)


# -- analytic test surfaces ---------------------------------------------------


def graph_immersion(u_fn, m, lo=None, hi=None, name="uhs-graph"):
    """Hyperboloid immersion of the UHS graph ``t = u(x)``; ``u_fn`` is vectorized."""

    def func(x):
        x = np.asarray(x, dtype=float)
        t = np.asarray(u_fn(x), dtype=float)
        return uhs_to_hyperboloid(np.concatenate([x, t[..., None]], axis=-1))

    return ParamImmersion(func, m, lo, hi, quadric=-1, name=name)


def cap_immersion(cap, margin=0.2):
    """Immersion of an umbilic cap over its base disk shrunk by ``margin``."""
    m = cap.center.size - 1
    r = cap.rho * (1 - margin) / np.sqrt(m)
    c = cap.center[:-1]
    return graph_immersion(cap.graph, m, c - r, c + r, name=f"cap(kappa={cap.kappa})")
