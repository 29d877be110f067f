"""Damped Newton solver for constant K-curvature graphs in the upper half-space.

The unknown is the height ``u > 0`` of the graph ``t = u(x)`` over the
grid nodes of an inward offset ``Omega_i = {sd < -delta_i}`` of the domain,
with Dirichlet data ``u = c_i`` on ``dOmega_i`` (the trace of the
horosphere ``t = c_i``).  Continuation runs first in kappa at the first
level, then through the exhaustion levels.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from ..curvature import CurvatureSpec
from ..errors import ConvexityBreakdownError, DivergenceError, DomainError, NotISCError
from ..immersion import frame_at, graph_immersion
from ..minkowski import umbilic_cap
from . import kernels
from ._kernels_py import derivatives_2d, _arm_values, _d1, _d2
from .stencil import Grid, build_stencil

log = logging.getLogger(__name__)

__all__ = [
    "SolveConfig",
    "GraphSolution",
    "residual",
    "shape_from_graph",
    "solve",
    "barrier_check",
    "boundary_angle",
    "default_margin",
]


def default_margin(height, kappa):
    """Inward offset at which the angle-arcsin(kappa) umbilic reaches ``height``."""
    return height * kappa / np.sqrt(1.0 - kappa * kappa)


@dataclass
class SolveConfig:
    spec: CurvatureSpec
    kappa: float
    n: int = 129
    heights: tuple = (0.1, 0.03, 0.01, 0.003, 0.001)
    margins: tuple | None = None
    kappa_path: tuple | None = None
    tol: float = 1e-9
    max_iter: int = 60
    max_halvings: int = 20
    fd_step: float = 1e-8
    stagnation_window: int = 10
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.kappa < 1.0:
            raise DomainError(f"kappa must lie in (0, 1), got {self.kappa}")
        h = np.asarray(self.heights, dtype=float)
        if len(h) == 0 or np.any(h <= 0) or np.any(np.diff(h) >= 0):
            raise ValueError("exhaustion heights must be positive and strictly decreasing")
        if self.margins is not None:
            mg = np.asarray(self.margins, dtype=float)
            if len(mg) != len(h) or np.any(np.diff(mg) >= 0) or np.any(mg < 0):
                raise ValueError("margins must match heights and decrease strictly")
        if self.n < 5:
            raise ValueError("grid needs at least 5 nodes per axis")

    def level_margins(self):
        if self.margins is not None:
            return [float(x) for x in self.margins]
        return [float(default_margin(c, self.kappa)) for c in self.heights]

    def path(self):
        if self.kappa_path is not None:
            p = [float(k) for k in self.kappa_path]
            if abs(p[-1] - self.kappa) > 0:
                p.append(float(self.kappa))
            return p
        out = [k for k in (0.95, 0.85, 0.75, 0.65) if k > self.kappa + 1e-12]
        return out + [float(self.kappa)]

    def to_json(self):
        d = asdict(self)
        d["spec"] = self.spec.to_json()
        d["heights"] = list(self.heights)
        d["margins"] = None if self.margins is None else list(self.margins)
        d["kappa_path"] = None if self.kappa_path is None else list(self.kappa_path)
        return d

    @classmethod
    def from_json(cls, obj):
        obj = dict(obj)
        allowed = set(cls.__dataclass_fields__)
        unknown = set(obj) - allowed
        if unknown:
            raise ValueError(f"unknown solver keys: {sorted(unknown)}")
        obj["spec"] = CurvatureSpec.from_json(obj["spec"])
        for key in ("heights", "margins", "kappa_path"):
            if obj.get(key) is not None:
                obj[key] = tuple(obj[key])
        return cls(**obj)


def residual(stencil, u, spec, kappa, impl=None):
    """``K(lam) - kappa`` per unknown, with the ISC mask and the curvatures.

    Non-ISC nodes get residual ``nan``.
    """
    lam, grad = kernels.principal(u, stencil.nbr, stencil.s, stencil.bval, stencil.h, impl)
    isc = np.all(lam > 0, axis=1) & (u > 0)
    r = np.full(len(u), np.nan)
    if np.any(isc):
        r[isc] = np.asarray(spec(lam[isc]), dtype=float).reshape(-1) - kappa
    return r, lam, isc


def jacobian(stencil, u, spec, kappa, step):
    """Sparse Jacobian of the residual by colored central differences.

    The perturbation of a node scales with its shortest arm, since a node
    at fraction ``s`` from the boundary responds on the scale ``s h``.
    """
    colors = stencil.colors()
    dl = step * np.clip(stencil.s.min(axis=1), 1e-2, 1.0)
    N = stencil.N
    members = np.concatenate([np.arange(N)[:, None], stencil.nbr], axis=1)
    valid = members >= 0
    mcol = np.where(valid, colors[np.maximum(members, 0)], -1)
    rows, cols, vals = [], [], []
    for c in range(3**stencil.m):
        sel = colors == c
        if not np.any(sel):
            continue
        up = u.copy()
        um = u.copy()
        up[sel] += dl[sel]
        um[sel] -= dl[sel]
        rp, _, _ = residual(stencil, up, spec, kappa)
        rm, _, _ = residual(stencil, um, spec, kappa)
        k, a = np.nonzero(mcol == c)
        col = members[k, a]
        rows.append(k)
        cols.append(col)
        vals.append((rp[k] - rm[k]) / (2 * dl[col]))
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    return sp.csr_matrix((vals, (rows, cols)), shape=(N, N))


@dataclass
class GraphSolution:
    """Discrete solution at the finest level reached, with its history."""

    domain: object
    config: SolveConfig
    stencil: object
    u: np.ndarray
    lam: np.ndarray
    grad: np.ndarray
    level: int
    height: float
    history: list = field(default_factory=list)
    drift: list = field(default_factory=list)
    levels: list = field(default_factory=list)

    @property
    def coords(self):
        return self.stencil.coords

    @property
    def h(self):
        return self.stencil.h

    @property
    def m(self):
        return self.stencil.m

    def residual(self):
        r, _, _ = residual(self.stencil, self.u, self.config.spec, self.config.kappa)
        return r

    def k_curvature(self):
        return np.asarray(self.config.spec(self.lam), dtype=float).reshape(-1)

    def max_residual(self):
        return float(np.nanmax(np.abs(self.residual())))

    def summary(self):
        return {
            "n": self.config.n,
            "h": self.h,
            "unknowns": int(self.stencil.N),
            "level": self.level,
            "height": self.height,
            "max_residual": self.max_residual(),
            "u_max": float(self.u.max()),
            "lam_min": float(self.lam.min()),
            "newton_steps": len(self.history),
            "drift": self.drift,
        }


def _newton(stencil, u, spec, kappa, cfg, history, tag):
    r, lam, isc = residual(stencil, u, spec, kappa)
    if not np.all(isc):
        raise ConvexityBreakdownError(f"initial iterate is not ISC at {int((~isc).sum())} nodes", iterate=u, history=history)
    norms = [float(np.linalg.norm(r))]
    for it in range(cfg.max_iter):
        rmax = float(np.abs(r).max())
        history.append({**tag, "iter": it, "max_residual": rmax, "l2_residual": norms[-1]})
        if rmax <= cfg.tol:
            return u, lam
        J = jacobian(stencil, u, spec, kappa, cfg.fd_step)
        du = spsolve(J.tocsc(), -r)
        t = 1.0
        isc_fail = False
        for _ in range(cfg.max_halvings + 1):
            un = u + t * du
            rn, lamn, iscn = residual(stencil, un, spec, kappa)
            if np.all(iscn):
                nn = float(np.linalg.norm(rn))
                if nn < norms[-1]:
                    break
            else:
                isc_fail = True
            t *= 0.5
        else:
            if isc_fail:
                raise ConvexityBreakdownError(
                    f"no damped step keeps the iterate ISC ({tag})", iterate=u, history=history
                )
            raise DivergenceError(f"line search failed to reduce the residual ({tag})", iterate=u, history=history)
        history[-1]["step"] = t
        u, r, lam = un, rn, lamn
        norms.append(nn)
        w = cfg.stagnation_window
        if len(norms) > w and norms[-1] > 0.99 * norms[-1 - w]:
            raise DivergenceError(f"Newton stagnated over {w} steps ({tag})", iterate=u, history=history)
    rmax = float(np.abs(r).max())
    if rmax > cfg.tol:
        raise DivergenceError(f"no convergence in {cfg.max_iter} iterations ({tag})", iterate=u, history=history)
    return u, lam


def _initial_cap(domain, stencil, kappa, height):
    """``max(height, cap)`` for the angle-arcsin(kappa) cap over the largest inscribed ball."""
    lo, hi = domain.bbox()
    g = stencil.coords
    sd = stencil.sd
    k = int(np.argmin(sd))
    c = g[k]
    rho = -float(sd[k])
    cap = umbilic_cap(rho, kappa, "down", center=c, m=domain.m)
    v = cap.graph(g)
    return np.where(np.isfinite(v), np.maximum(v, height), height)


def _ramp(depth, d_new, d_old, c_new, c_old, kappa, rho):
    """Heights for nodes entering at a new level.

    Follows the cross-section of the angle-arcsin(kappa) cap over a ball of
    radius ``rho``, rescaled to pass through ``(d_new, c_new)`` and
    ``(d_old, c_old)``, so the new ring meets the carried solution without
    a concave kink.
    """
    R = rho / np.sqrt(1.0 - kappa * kappa)

    def prof(d):
        return np.sqrt(np.maximum(R * R - (rho - np.minimum(d, rho)) ** 2, 0.0)) - kappa * R

    p0, p1 = prof(d_new), prof(d_old)
    if not p1 > p0:
        return c_new + (c_old - c_new) * np.clip((depth - d_new) / max(d_old - d_new, 1e-300), 0.0, 1.0)
    w = np.clip((prof(depth) - p0) / (p1 - p0), 0.0, 1.0)
    return c_new + (c_old - c_new) * w


def _repair_isc(stencil, u, spec, kappa, max_sweeps=200):
    """Smooth concave kinks left by the level-transition ramp.

    Non-ISC nodes and their neighbours are relaxed halfway towards the mean
    of their arm-pair interpolants until every node is ISC again.
    """
    u = u.copy()
    pairs = range(0, min(stencil.nbr.shape[1], 4), 2)
    for _ in range(max_sweeps):
        _, _, isc = residual(stencil, u, spec, kappa)
        bad = np.nonzero(~isc)[0]
        if len(bad) == 0:
            break
        nb = stencil.nbr[bad]
        sel = np.unique(np.concatenate([bad, nb[nb >= 0]]))
        ua = np.where(stencil.nbr[sel] >= 0, u[np.maximum(stencil.nbr[sel], 0)], stencil.bval)
        sb = stencil.s[sel]
        interp = [(ua[:, a + 1] * sb[:, a] + ua[:, a] * sb[:, a + 1]) / (sb[:, a] + sb[:, a + 1]) for a in pairs]
        u[sel] = 0.5 * u[sel] + 0.5 * np.mean(interp, axis=0)
    return u


def solve(domain, config):
    """Solve ``K(lam(u)) = kappa`` through the continuation schedule.

    Returns the finest-level ``GraphSolution``.  Raises ``DivergenceError``
    on stagnation and ``ConvexityBreakdownError`` if damping cannot keep
    the iterate ISC.
    """
    cfg = config
    spec = cfg.spec
    if spec.m != domain.m:
        raise ValueError(f"curvature function dimension {spec.m} != domain dimension {domain.m}")
    if domain.m not in (1, 2):
        raise ValueError("the Plateau solver supports m = 1, 2")
    grid = Grid.over(domain, cfg.n)
    margins = cfg.level_margins()
    history, drift, levels = [], [], []
    path = cfg.path()

    st = build_stencil(domain, grid, margins[0], cfg.heights[0])
    u = _initial_cap(domain, st, path[0], cfg.heights[0])
    for kap in path:
        u, lam = _newton(st, u, spec, kap, cfg, history, {"level": 0, "kappa": kap})
    levels.append({"level": 0, "height": cfg.heights[0], "margin": margins[0], "unknowns": int(st.N)})

    for i in range(1, len(cfg.heights)):
        c_new, c_old = cfg.heights[i], cfg.heights[i - 1]
        d_new, d_old = margins[i], margins[i - 1]
        st_new = build_stencil(domain, grid, d_new, c_new)
        old_pos = np.full(grid.n**grid.m, -1, dtype=np.int64)
        old_pos[st.flat] = np.arange(st.N)
        carried = old_pos[st_new.flat]
        depth = -st_new.sd
        ramp = _ramp(depth, d_new, d_old, c_new, c_old, cfg.kappa, domain.inradius())
        u_new = np.where(carried >= 0, u[np.maximum(carried, 0)], ramp)
        u_new = _repair_isc(st_new, u_new, spec, cfg.kappa)
        u_prev = u_new.copy()
        _, _, isc = residual(st_new, u_new, spec, cfg.kappa)
        if np.all(isc):
            u_new, lam = _newton(st_new, u_new, spec, cfg.kappa, cfg, history, {"level": i, "kappa": cfg.kappa})
        else:
            # under-resolved boundary layer: restart the level from a cap
            log.info("level %d: carried iterate not ISC, restarting from a cap", i)
            u_new = _initial_cap(domain, st_new, path[0], c_new)
            for kap in path:
                u_new, lam = _newton(st_new, u_new, spec, kap, cfg, history, {"level": i, "kappa": kap})
        keep = carried >= 0
        drift.append(float(np.abs(u_new[keep] - u_prev[keep]).max()))
        st, u = st_new, u_new
        levels.append({"level": i, "height": c_new, "margin": d_new, "unknowns": int(st.N)})

    lam, grad = kernels.principal(u, st.nbr, st.s, st.bval, st.h)
    return GraphSolution(domain, cfg, st, u, lam, grad, len(cfg.heights) - 1, cfg.heights[-1], history, drift, levels)


# -- shape operator via the pullback route ------------------------------------


def _local_jet(stencil, u, k):
    nbr = stencil.nbr[k : k + 1]
    s = stencil.s[k : k + 1]
    uu = u
    if stencil.m == 2:
        g, uxx, uyy, uxy = derivatives_2d(uu, stencil.nbr, stencil.s, stencil.bval, stencil.h)
        return float(u[k]), g[k], np.array([[uxx[k], uxy[k]], [uxy[k], uyy[k]]])
    ua = _arm_values(uu, nbr, stencil.bval)
    ux = _d1(ua[:, 1], uu[k], ua[:, 0], s[:, 1], s[:, 0], stencil.h)
    uxx = _d2(ua[:, 1], uu[k], ua[:, 0], s[:, 1], s[:, 0], stencil.h)
    return float(u[k]), np.array([ux[0]]), np.array([[uxx[0]]])


def shape_from_graph(stencil, u, k, h=1e-3):
    """``(A, lam, nu)`` at unknown ``k`` by pulling the local quadratic jet back to the hyperboloid.

    The discrete jet ``u0 + g.dx + dx.H.dx / 2`` is lifted through the
    upper half-space chart and analysed with ``frame_at``.
    """
    if u[k] <= 0:
        raise DomainError("graph height must be positive")
    u0, g, H = _local_jet(stencil, u, k)
    x0 = stencil.coords[k]

    def jet(x):
        dx = np.asarray(x) - x0
        return u0 + dx @ g + 0.5 * np.einsum("...i,ij,...j->...", dx, H, dx)

    e = graph_immersion(jet, stencil.m, x0 - 10 * h, x0 + 10 * h, name="graph-jet")
    fr = frame_at(e, x0, h, 2)
    return fr.A, fr.lam, fr.normal


# -- barrier comparisons and boundary angle -------------------------------------


def _interp_u(sol, pts):
    """Heights at arbitrary points: nearest unknown (diagnostic use only)."""
    from scipy.spatial import cKDTree

    tree = cKDTree(sol.coords)
    d, k = tree.query(pts)
    return sol.u[k], d


def barrier_check(sol, n_boundary=32, radii=(0.05, 0.1, 0.2, 0.4), interior_scales=(1.0, 0.9, 0.5), tol=None):
    """Compare the solution with umbilic barriers of the same angle.

    * Caps with centre below the ideal boundary over balls ``B`` inside the
      domain lie below the solution: ``u >= cap - tol``.
    * Bulbs with centre above over exterior balls tangent to the boundary
      lie above it where both are defined: ``u <= lower sheet + tol``.

    The tolerance defaults to the grid spacing.
    """
    dom = sol.domain
    kappa = sol.config.kappa
    tol = sol.h if tol is None else tol
    X, u = sol.coords, sol.u
    m = sol.m
    report = {"tolerance": tol, "interior": [], "exterior": [], "violations": []}

    # interior caps: largest inscribed balls at a few centres, shrunk
    centres = [X[np.argmin(sol.stencil.sd)]]
    if m == 2:
        rng = np.random.default_rng(sol.config.seed)
        pick = rng.choice(len(X), size=min(6, len(X)), replace=False)
        centres += [X[p] for p in pick]
    for c in centres:
        r_in = -float(dom.sd(c[None])[0])
        if r_in <= 0:
            continue
        for sc in interior_scales:
            cap = umbilic_cap(r_in * sc, kappa, "down", center=c, m=m)
            v = cap.graph(X)
            mask = np.isfinite(v)
            gap = float(np.max(v[mask] - u[mask])) if np.any(mask) else -np.inf
            rec = {"center": c.tolist(), "rho": r_in * sc, "max_excess": gap, "ok": gap <= tol}
            report["interior"].append(rec)
            if not rec["ok"]:
                k = int(np.argmax(np.where(mask, v - u, -np.inf)))
                report["violations"].append({"kind": "interior", "cap": rec, "node": k})

    # exterior bulbs tangent at boundary samples
    B = dom.boundary_samples(n_boundary)
    nrm = dom.gradient(B)
    for x0, nv in zip(B, nrm):
        for r in radii:
            c = x0 + r * nv
            if dom.sd(c[None])[0] < r - 1e-9:
                continue
            bulb = umbilic_cap(r, kappa, "up", center=c, m=m)
            v = bulb.graph(X)
            mask = np.isfinite(v)
            gap = float(np.max(u[mask] - v[mask])) if np.any(mask) else -np.inf
            rec = {"center": c.tolist(), "rho": r, "max_excess": gap, "ok": gap <= tol}
            report["exterior"].append(rec)
            if not rec["ok"]:
                k = int(np.argmax(np.where(mask, u - v, -np.inf)))
                report["violations"].append({"kind": "exterior", "bulb": rec, "node": k})
    report["ok"] = not report["violations"]
    return report


def boundary_angle(sol, band=0.15, sectors=8, degree=3):
    """Contact angle with the vertical along the boundary, per boundary sector.

    Near the boundary the distance ``d`` to the original boundary is a
    smooth function of the height ``t`` (the umbilic cross-section
    ``d = r - sqrt(R^2 - (t + kappa R)^2)`` for a disk of radius ``r``), with
    ``d'(0) = tan(theta)`` whatever the local boundary curvature.  Nodes with
    ``u <= band * inradius`` are fitted by a polynomial ``d(t)`` per sector.
    Angles are reported in degrees.
    """
    dom = sol.domain
    X, u = sol.coords, sol.u
    d = -dom.sd(X)
    near = u <= band * max(dom.inradius(), 1e-12)
    foot = dom.project(X)
    if sol.m == 1:
        sector = (foot[:, 0] > dom.center[0]).astype(int)
        sectors = 2
    else:
        c = X[np.argmin(sol.stencil.sd)]
        ang = np.arctan2(foot[:, 1] - c[1], foot[:, 0] - c[0])
        sector = np.floor((ang + np.pi) / (2 * np.pi) * sectors).astype(int) % sectors
    out = []
    for s in range(sectors):
        sel = near & (sector == s)
        if sel.sum() < 2 * (degree + 1):
            continue
        coef = np.polynomial.polynomial.polyfit(u[sel], d[sel], degree)
        theta = np.degrees(np.arctan(coef[1]))
        out.append({"sector": s, "angle_deg": float(theta), "samples": int(sel.sum()), "d0": float(coef[0])})
    angles = [o["angle_deg"] for o in out]
    return {
        "sectors": out,
        "mean_deg": float(np.mean(angles)) if angles else float("nan"),
        "expected_deg": float(np.degrees(np.arcsin(sol.config.kappa))),
    }


def dump_iterate(path, err):
    """Write the iterate and history carried by a ``DivergenceError``."""
    data = {"message": str(err), "history": err.history}
    if err.iterate is not None:
        data["iterate"] = np.asarray(err.iterate).tolist()
    with open(path, "w") as fh:
        json.dump(data, fh)
    return path
