"""Barrier functions and the Pogorelov-type quantity on sampled convex surfaces.

The half-space barrier is ``f(x) = <x, nu1>`` on the hyperboloid with
``<nu1, nu1> = 1``, so ``Hess f = f Id``.  The de Sitter barrier is
``f_hat(y) = <nu0, y> - eps`` on the dual side, with
``Hess f_hat = -(f_hat + eps) Id``.  On a sampled ISC surface with principal
curvatures ``lam_1 >= ... >= lam_m`` the monitored quantity is

    Phi_alpha = log(lam_1) + alpha log(f o e) - log(f_hat o nu).

Sampled surfaces come either from a Plateau solution or from an analytic
immersion evaluated on a chart grid.  Both carry axis neighbours so that
discrete gradients of ``Phi_alpha`` are available.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainViolation, EigenbasisError, PreconditionError, SignatureError
from .immersion import (
    ambient_hessian,
    frame_at,
    graph_immersion,
    k_laplacian,
    principal_derivatives,
)
from .minkowski import (
    DSPoint,
    HPoint,
    klein_to_hyperboloid,
    mink_inner,
    uhs_to_hyperboloid,
    uhs_to_hyperboloid_jacobian,
)

log = logging.getLogger(__name__)

__all__ = [
    "HalfspaceBarrier",
    "DeSitterBarrier",
    "BarrierPair",
    "SampledSurface",
    "PhiField",
    "make_barriers",
    "dome_normal",
    "canonical_barriers",
    "barrier_hessian_check",
    "phi_alpha",
    "critical_point_residual",
    "euler_bound_check",
    "curvature_term_diagnostic",
    "sup_quantity",
    "uniform_bound_check",
]

HESS_TOL = 1e-5
GAP_SKIP = 1e-4


# -- barriers -----------------------------------------------------------------


@dataclass(frozen=True)
class HalfspaceBarrier:
    """``f(x) = scale <x, nu1>`` on the hyperboloid, positive on the half-space ``V``."""

    nu1: np.ndarray
    scale: float = 1.0

    def __call__(self, x):
        return self.scale * mink_inner(x, self.nu1)

    def uhs(self, p):
        """Evaluate on upper half-space points ``(z, t)``."""
        return self(uhs_to_hyperboloid(p))


@dataclass(frozen=True)
class DeSitterBarrier:
    """``f_hat(y) = <nu0, y> - eps`` on de Sitter space, working domain ``f_hat > 2 eps``."""

    nu0: np.ndarray
    epsilon: float

    def __call__(self, y):
        return mink_inner(self.nu0, y) - self.epsilon


@dataclass
class BarrierPair:
    f: HalfspaceBarrier
    fhat: DeSitterBarrier
    B: float = 1.0
    alpha: float = 3.0
    hessian_check: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "nu1": self.f.nu1.tolist(),
            "scale": self.f.scale,
            "nu0": self.fhat.nu0.tolist(),
            "epsilon": self.fhat.epsilon,
            "B": self.B,
            "alpha": self.alpha,
            "hessian_check": self.hessian_check,
        }


def _tangent_basis(p, quadric):
    """Orthonormal basis of ``p^perp`` and the signs ``<w_i, w_i>``."""
    n = p.size
    ws, signs = [], []
    for i in range(n):
        w = np.zeros(n)
        w[i] = 1.0
        w = w - mink_inner(w, p) / quadric * p
        for v, s in zip(ws, signs):
            w = w - mink_inner(w, v) / s * v
        n2 = mink_inner(w, w)
        if abs(n2) < 1e-8:
            continue
        ws.append(w / np.sqrt(abs(n2)))
        signs.append(np.sign(n2))
        if len(ws) == n - 1:
            break
    return np.array(ws), np.array(signs)


def _random_hyperboloid(rng, m, count, radius=0.8):
    y = rng.normal(size=(count, m + 1))
    y *= (radius * rng.uniform(0, 1, size=(count, 1)) ** (1.0 / (m + 1))) / np.linalg.norm(y, axis=1, keepdims=True)
    return klein_to_hyperboloid(y)


def _random_desitter(rng, m, count):
    out = []
    while len(out) < count:
        v = rng.normal(size=m + 2)
        v[-1] *= 0.5
        n2 = mink_inner(v, v)
        if n2 > 0.1:
            out.append(v / np.sqrt(n2))
    return np.array(out)


def barrier_hessian_check(pair, m, samples=20, h=1e-3, seed=0, tol=HESS_TOL):
    """Geodesic-difference Hessians of both barriers against their closed forms.

    ``Hess f = f Id`` on random hyperboloid points; ``Hess f_hat =
    -(f_hat + eps) <.,.>`` on random de Sitter points, in an orthonormal
    tangent frame (one timelike direction).
    """
    rng = np.random.default_rng(seed)
    res_f, res_fh = [], []
    for p in _random_hyperboloid(rng, m, samples):
        W, sg = _tangent_basis(p, -1)
        H = ambient_hessian(pair.f, p, W, -1, h)
        res_f.append(float(np.abs(H - pair.f(p) * np.diag(sg)).max()))
    for y in _random_desitter(rng, m, samples):
        W, sg = _tangent_basis(y, 1)
        H = ambient_hessian(pair.fhat, y, W, 1, h)
        target = -(pair.fhat(y) + pair.fhat.epsilon) * np.diag(sg)
        res_fh.append(float(np.abs(H - target).max()))
    return {
        "samples": samples,
        "h": h,
        "f_max_residual": max(res_f),
        "fhat_max_residual": max(res_fh),
        "ok": max(res_f) <= tol and max(res_fh) <= tol,
    }


def make_barriers(x0, nu0, epsilon, nu1, alpha=None, B=1.0, verify=True, seed=0):
    """Build the barrier pair and check both Hessian identities on random samples.

    ``x0`` is the reference point (an ``HPoint`` or array).  The condition
    ``<nu0, nu> > 4 eps`` on the intended body is the caller's business.
    """
    nu1 = np.asarray(nu1, dtype=float)
    if abs(mink_inner(nu1, nu1) - 1.0) > 1e-8:
        raise SignatureError(f"nu1 must be a unit spacelike vector, got <nu1,nu1> = {mink_inner(nu1, nu1):.3e}")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    nu0 = nu0.v if isinstance(nu0, DSPoint) else DSPoint(np.asarray(nu0, dtype=float)).v
    x0 = x0.v if isinstance(x0, HPoint) else np.asarray(x0, dtype=float)
    if alpha is None:
        alpha = max(2.0, B) + 1.0
    pair = BarrierPair(HalfspaceBarrier(nu1), DeSitterBarrier(nu0, float(epsilon)), float(B), float(alpha))
    if verify:
        pair.hessian_check = barrier_hessian_check(pair, x0.size - 2, seed=seed)
        if not pair.hessian_check["ok"]:
            log.warning("barrier Hessian check failed: %s", pair.hessian_check)
    return pair


def dome_normal(center, radius):
    """``nu1`` of the totally geodesic hemisphere ``|z - c|^2 + t^2 = radius^2``.

    In the upper half-space, ``<x, nu1> = (radius^2 - |z - c|^2 - t^2) / (2 radius t)``,
    positive under the dome.
    """
    c = np.asarray(center, dtype=float)
    r = float(radius)
    c2 = c @ c
    return np.concatenate([c / r, [-(r * r - c2 + 1.0) / (2 * r), (1.0 - r * r + c2) / (2 * r)]])


# -- sampled surfaces -----------------------------------------------------------


def _axis_neighbours(index, shape):
    """``(N, 2m)`` neighbour table in the order ``+x0, -x0, +x1, -x1, ...``."""
    m = index.shape[1]
    lookup = -np.ones(shape, dtype=np.int64)
    lookup[tuple(index.T)] = np.arange(len(index))
    nbr = -np.ones((len(index), 2 * m), dtype=np.int64)
    for a in range(m):
        for s, col in ((1, 2 * a), (-1, 2 * a + 1)):
            j = index.copy()
            j[:, a] += s
            ok = (j[:, a] >= 0) & (j[:, a] < shape[a])
            nbr[ok, col] = lookup[tuple(j[ok].T)]
    return nbr


@dataclass
class SampledSurface:
    """ISC surface samples with points, unit normals and principal curvatures.

    ``lam`` is sorted in descending order; ``nbr`` lists the axis neighbours
    on the chart grid of spacing ``h`` (``-1`` where absent).
    """

    chart: np.ndarray
    points: np.ndarray
    normals: np.ndarray
    lam: np.ndarray
    nbr: np.ndarray
    h: float
    spec: object = None
    kappa: float | None = None
    immersion: object = None
    label: str = ""

    @property
    def N(self):
        return len(self.chart)

    @property
    def m(self):
        return self.chart.shape[1]

    def with_lam(self, lam, label=None):
        return replace(self, lam=np.asarray(lam, dtype=float), label=label or self.label)

    @classmethod
    def from_graph(cls, sol, label=None):
        """Samples of a Plateau ``GraphSolution`` (graph ``t = u(x)`` in the half-space)."""
        X = sol.coords
        u = sol.u
        g = sol.grad
        P = np.concatenate([X, u[:, None]], axis=1)
        pts = uhs_to_hyperboloid(P)
        nE = np.concatenate([-g, np.ones((len(u), 1))], axis=1) / np.sqrt(1.0 + np.sum(g * g, axis=1))[:, None]
        J = uhs_to_hyperboloid_jacobian(P)
        nu = -np.einsum("nij,nj->ni", J, u[:, None] * nE)
        st = sol.stencil
        nbr = st.nbr[:, : 2 * st.m].copy()
        return cls(
            X.copy(),
            pts,
            nu,
            np.asarray(sol.lam, dtype=float),
            nbr,
            float(st.h),
            sol.config.spec,
            float(sol.config.kappa),
            _spline_immersion(sol),
            label or f"graph(n={sol.config.n})",
        )

    @classmethod
    def from_immersion(cls, e, lo, hi, n, spec=None, kappa=None, h=1e-3, label=None):
        """Frames of an analytic immersion on an ``n^m`` chart grid over ``[lo, hi]``."""
        m = e.m
        lo = np.broadcast_to(np.asarray(lo, dtype=float), (m,))
        hi = np.broadcast_to(np.asarray(hi, dtype=float), (m,))
        axes = [np.linspace(lo[i], hi[i], n) for i in range(m)]
        if m > 1 and not np.allclose(np.diff(axes[0][:2]), [axes[i][1] - axes[i][0] for i in range(m)]):
            raise ValueError("chart grid must have equal spacing on every axis")
        U = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, m)
        index = np.stack(np.meshgrid(*[np.arange(n)] * m, indexing="ij"), -1).reshape(-1, m)
        pts, nus, lams = [], [], []
        sign = None
        for u in U:
            fr = frame_at(e, u, h, 2, sign)
            sign = fr.sign
            pts.append(fr.point)
            nus.append(fr.normal)
            lams.append(fr.lam)
        return cls(
            U,
            np.array(pts),
            np.array(nus),
            np.array(lams),
            _axis_neighbours(index, (n,) * m),
            float(axes[0][1] - axes[0][0]),
            spec,
            kappa,
            e,
            label or e.name,
        )


def _spline_immersion(sol):
    """Bicubic (or cubic) interpolant of a grid solution, lifted to the hyperboloid.

    Nodes outside the final level carry the boundary height, which only
    affects the interpolant near the boundary ring.
    """
    from scipy.interpolate import CubicSpline, RectBivariateSpline

    st = sol.stencil
    grid = st.grid
    axis = grid.lo[0] + grid.h * np.arange(grid.n)
    U = st.to_grid(sol.u, fill=st.bval)
    if st.m == 1:
        sp = CubicSpline(axis, U)

        def fn(x):
            return sp(np.asarray(x)[..., 0])

    else:
        axis_y = grid.lo[1] + grid.h * np.arange(grid.n)
        sp = RectBivariateSpline(axis, axis_y, U, kx=3, ky=3, s=0)

        def fn(x):
            x = np.asarray(x, dtype=float)
            return sp.ev(x[..., 0], x[..., 1])

    lo, hi = sol.domain.bbox()
    return graph_immersion(fn, st.m, np.asarray(lo, dtype=float), np.asarray(hi, dtype=float), name="spline-graph")


# -- the monitored quantity ----------------------------------------------------


@dataclass
class PhiField:
    """Values of ``Phi_alpha`` on the working set (``-inf`` elsewhere)."""

    alpha: float
    values: np.ndarray
    working: np.ndarray
    f: np.ndarray
    fhat: np.ndarray
    argmax: int
    max_value: float
    interior: bool

    def to_json(self):
        return {
            "alpha": self.alpha,
            "argmax": self.argmax,
            "max_value": self.max_value,
            "interior": self.interior,
            "working_count": int(self.working.sum()),
        }


def _interior_mask(surface, working):
    nb = surface.nbr
    ok = np.all(nb >= 0, axis=1)
    ok &= np.all(np.where(nb >= 0, working[np.maximum(nb, 0)], False), axis=1)
    return working & ok


def phi_alpha(surface, barriers, alpha=None, restrict=True):
    """Evaluate ``Phi_alpha`` over the samples.

    With ``restrict`` the working set is ``{f > 0}`` and samples outside it
    are ignored; otherwise any sample with ``f <= 0`` is a violation.
    Samples of the working set with ``f_hat <= 2 eps`` always raise
    ``DomainViolation``.
    """
    alpha = barriers.alpha if alpha is None else float(alpha)
    f = barriers.f(surface.points)
    fh = barriers.fhat(surface.normals)
    working = f > 0
    if not restrict and not np.all(working):
        raise DomainViolation("f <= 0 at some samples", np.nonzero(~working)[0].tolist())
    if not np.any(working):
        raise DomainViolation("the working set {f > 0} is empty", [])
    bad = working & (fh <= 2 * barriers.fhat.epsilon)
    if np.any(bad):
        raise DomainViolation("f_hat <= 2 eps on the working set", np.nonzero(bad)[0].tolist())
    lam1 = surface.lam[:, 0]
    if np.any(lam1[working] <= 0):
        raise DomainViolation("lam_1 <= 0 on the working set", np.nonzero(working & (lam1 <= 0))[0].tolist())
    vals = np.full(surface.N, -np.inf)
    w = working
    vals[w] = np.log(lam1[w]) + alpha * np.log(f[w]) - np.log(fh[w])
    k = int(np.argmax(vals))
    interior = bool(_interior_mask(surface, working)[k])
    return PhiField(alpha, vals, working, f, fh, k, float(vals[k]), interior)


def _discrete_gradient(surface, values, k):
    nb = surface.nbr[k]
    g = np.empty(surface.m)
    for a in range(surface.m):
        p, q = nb[2 * a], nb[2 * a + 1]
        if p < 0 or q < 0:
            return None
        g[a] = (values[p] - values[q]) / (2 * surface.h)
    return g


def _chart_frame(surface, k, h=1e-3):
    """I-orthonormal principal directions at sample ``k`` (chart coordinates)."""
    e = surface.immersion
    if e is None:
        raise PreconditionError("principal directions need an immersion for the samples")
    return frame_at(e, surface.chart[k], h, 2)


def critical_point_residual(surface, barriers, alpha=None, index=None, field=None):
    """Components ``dPhi_alpha(e_k)`` of the discrete gradient in the principal frame.

    At a critical point of ``Phi_alpha`` these are the left-hand sides of
    ``A_11k / lam_1 + alpha f_k / f - lam_k f_hat_k / f_hat = 0``.  Defaults
    to the maximizer.  The residual is reported, not asserted to vanish.
    """
    pf = field if field is not None else phi_alpha(surface, barriers, alpha)
    k = pf.argmax if index is None else int(index)
    g = _discrete_gradient(surface, pf.values, k)
    if g is None or not np.all(np.isfinite(g)):
        return {"index": k, "components": None, "norm": float("inf"), "interior": False}
    fr = _chart_frame(surface, k)
    comp = fr.V.T @ g
    return {"index": k, "components": comp.tolist(), "norm": float(np.linalg.norm(comp)), "interior": True}


def euler_bound_check(surface, tol=1e-8):
    """``mu_1 lam_1 <= K(lam) + tol`` at every sample (largest curvature, smallest weight)."""
    spec = surface.spec
    if spec is None:
        raise PreconditionError("euler_bound_check needs the curvature function of the samples")
    worst = -np.inf
    fails = []
    for k, lam in enumerate(surface.lam):
        K, mu, ls = spec.gradient(lam)
        target = float(K) if surface.kappa is None else float(surface.kappa)
        gap = float(mu[0] * ls[0] - target)
        worst = max(worst, gap)
        if gap > tol:
            fails.append(k)
    return {"max_excess": worst, "violations": fails, "ok": not fails}


def curvature_term_diagnostic(surface, barriers=None, alpha=None, index=None, h=2e-2, inner_h=1e-2, tol=1e-2):
    """Both sides of the weak lower bound for ``Lap^K log lam_1`` at a sample.

    The right-hand side is assembled from the principal curvatures, the
    weights ``mu`` and ``A_11k`` in the principal frame; the left-hand side
    is a finite-difference K-laplacian of ``log lam_1``.  Samples where
    ``lam_1 - lam_2 < 1e-4`` are skipped, since ``lam_1`` is not smooth there.
    Soft check: the outcome is reported, never raised; ``tol`` absorbs the
    noise of the nested fourth-order differences.
    """
    if index is None:
        if barriers is None:
            raise ValueError("give a sample index or barriers to locate the maximizer")
        index = phi_alpha(surface, barriers, alpha).argmax
    e = surface.immersion
    spec = surface.spec
    u0 = surface.chart[index]
    out = {"index": int(index)}
    try:
        lam, V, T = principal_derivatives(e, u0, h, inner_h)
    except EigenbasisError as exc:
        out.update(skipped=True, reason=str(exc))
        return out
    if lam.size > 1 and lam[0] - lam[1] < GAP_SKIP:
        out.update(skipped=True, reason="lam_1 has multiplicity (gap < 1e-4)")
        return out
    K, mu, lam = spec.gradient(lam)
    kappa = float(K)
    mu_sum = float(np.sum(mu))
    muhat = float(np.sum(mu * lam**2))
    A11 = T[0, 0, :]
    l1 = lam[0]
    first = sum(2.0 / l1 * (mu[k] - mu[0]) / (l1 - lam[k]) * A11[k] ** 2 for k in range(1, lam.size))
    second = -np.sum(mu * A11**2) / l1**2
    rhs = float(first + second - (muhat + mu_sum) + kappa * (l1 + 1.0 / l1))

    def log_lam1(us):
        us = np.atleast_2d(us)
        vals = [np.log(frame_at(e, p, inner_h, 2).lam[0]) for p in us.reshape(-1, e.m)]
        return np.array(vals).reshape(us.shape[:-1])

    lhs = k_laplacian(e, spec, log_lam1, u0, h, 1)
    out.update(skipped=False, lhs=float(lhs), rhs=rhs, holds=bool(lhs >= rhs - tol))
    if not out["holds"]:
        log.info("curvature-term bound not met at sample %d: lhs %.3e < rhs %.3e", index, lhs, rhs)
    return out


# -- barrier choice for a family of surfaces ------------------------------------


def canonical_barriers(surface, center=None, radius=None, apex=None, margin=0.25, verify=True):
    """Dome barrier and apex-normal dual barrier for a graph-like surface.

    ``f`` is positive under the hemisphere of ``radius`` about ``center``;
    by default the radius sits halfway between the apex height and the
    distance from ``center`` to the edge of the sampled chart, so that
    ``{f > 0}`` is a compact cap of the surface.  ``nu0`` is the normal at
    ``apex`` (default: the highest sample), ``eps = margin * min <nu0, nu>``
    over the working set, then ``B = max(1, 1 / f_hat_min, f_hat_max / eps)``
    and ``alpha = max(2, B) + 1``.
    """
    X = surface.chart
    heights = 1.0 / (surface.points[:, -1] - surface.points[:, -2])
    k_top = int(np.argmax(heights)) if apex is None else int(apex)
    c = X[k_top] if center is None else np.asarray(center, dtype=float)
    if radius is None:
        reach = np.min(np.where(np.any(surface.nbr < 0, axis=1), np.linalg.norm(X - c, axis=1), np.inf))
        radius = 0.5 * (heights[k_top] + reach)
        if radius <= heights[k_top]:
            raise PreconditionError("the surface is too tall for a dome barrier inside the sampled chart")
    nu1 = dome_normal(c, radius)
    f = mink_inner(surface.points, nu1)
    working = f > 0
    nu0 = surface.normals[k_top]
    nu0 = nu0 / np.sqrt(mink_inner(nu0, nu0))
    dots = mink_inner(surface.normals[working], nu0)
    if dots.min() <= 0:
        raise PreconditionError("apex normal does not support the working set (<nu0, nu> <= 0)")
    eps = margin * float(dots.min())
    fh = dots - eps
    B = max(1.0, 1.0 / fh.min(), fh.max() / eps)
    pair = make_barriers(surface.points[k_top], nu0, eps, nu1, alpha=max(2.0, B) + 1.0, B=B, verify=verify)
    return pair


# -- uniform bound across a sequence --------------------------------------------


def sup_quantity(surface, barriers, alpha=None):
    """``sup lam_1 f^alpha / f_hat`` over the working set, with its location."""
    pf = phi_alpha(surface, barriers, alpha)
    return {
        "label": surface.label,
        "h": surface.h,
        "sup": float(np.exp(pf.max_value)),
        "argmax": pf.argmax,
        "at": surface.chart[pf.argmax].tolist(),
        "interior": pf.interior,
    }


def uniform_bound_check(surfaces, barriers=None, alpha=None, drift_tol=0.05, blowup_growth=0.25, blowup_run=3):
    """Stability of ``sup lam_1 f^alpha / f_hat`` along a refinement sequence.

    ``surfaces`` go from coarse to fine.  Barriers default to the canonical
    pair of the finest surface and are shared by the whole sequence.  The
    drift is ``(max - min) / finest``; blow-up is flagged when the sup grows
    by more than ``blowup_growth`` at every step of a run of ``blowup_run``
    consecutive surfaces.
    """
    if len(surfaces) < 2:
        raise ValueError("need at least two surfaces")
    if barriers is None:
        barriers = canonical_barriers(surfaces[-1])
    rows = [sup_quantity(s, barriers, alpha) for s in surfaces]
    sups = np.array([r["sup"] for r in rows])
    ratios = sups[1:] / sups[:-1]
    blowup = False
    count = 0
    for g in ratios > 1.0 + blowup_growth:
        count = count + 1 if g else 0
        blowup |= count >= blowup_run - 1
    drift = float((sups.max() - sups.min()) / sups[-1])
    return {
        "alpha": barriers.alpha if alpha is None else float(alpha),
        "B": barriers.B,
        "epsilon": barriers.fhat.epsilon,
        "rows": rows,
        "ratios": ratios.tolist(),
        "drift": drift,
        "blowup": blowup,
        "bounded": (not blowup) and drift <= drift_tol,
    }
