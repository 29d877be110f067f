"""Convex curvature functions on the positive cone and their derivatives.

Two builtin families are provided, both normalized so that ``K(1, ..., 1) = 1``:

``power-sigma(k)``
    ``(sigma_k(lam) / C(m, k)) ** (1 / k)``
``quotient(k, l)``
    ``(sigma_k(lam) / sigma_l(lam) * C(m, l) / C(m, k)) ** (1 / (k - l))``

Internally every argument is sorted in descending order, so that the
derivative vector ``mu`` comes out in ascending order and evaluations are
bit-identical under permutation of the input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import DomainError

__all__ = [
    "CurvatureSpec",
    "DerivativeBundle",
    "DualCurvature",
    "CallbackCurvature",
    "PropertyReport",
    "eval_K",
    "grad_K",
    "hessian_K",
    "hessian_quadratic_form",
    "dual_spec",
    "verify_properties",
    "identity_suite",
    "register_curvature",
]

IDENTITY_TOL = 1e-10
PROPERTY_TOL = 1e-9


def _esym(lam, kmax):
    """Elementary symmetric polynomials e_0..e_kmax along the last axis."""
    lam = np.asarray(lam, dtype=float)
    out = np.zeros(lam.shape[:-1] + (kmax + 1,))
    out[..., 0] = 1.0
    n = lam.shape[-1]
    for j in range(n):
        x = lam[..., j]
        for r in range(min(j + 1, kmax), 0, -1):
            out[..., r] = out[..., r] + x * out[..., r - 1]
    return out


def _sigma(lam, r):
    if r < 0:
        return np.zeros(lam.shape[:-1])
    if r == 0:
        return np.ones(lam.shape[:-1])
    if r > lam.shape[-1]:
        return np.zeros(lam.shape[:-1])
    return _esym(lam, r)[..., r]


def _sigma_without(lam, r, drop):
    return _sigma(np.delete(lam, drop, axis=-1), r)


@dataclass(frozen=True)
class DerivativeBundle:
    """Value and first-order data of K at a point of the positive cone.

    ``lam`` and ``mu`` share the same (descending-``lam``) index order.
    """

    value: float
    lam: np.ndarray
    mu: np.ndarray
    trace_mu: float
    trace_muhat: float

    def euler_residual(self):
        return abs(float(np.dot(self.mu, self.lam)) - self.value)


@dataclass(frozen=True)
class CurvatureSpec:
    """A builtin convex curvature function on the positive cone of R^m."""

    kind: str
    k: int
    m: int
    l: int = 0

    def __post_init__(self):
        if self.kind not in ("power-sigma", "quotient"):
            raise ValueError(f"unknown curvature kind {self.kind!r}")
        if self.m < 1:
            raise ValueError("dimension m must be positive")
        if not 1 <= self.k <= self.m:
            raise ValueError(f"k={self.k} must lie in [1, m={self.m}]")
        if self.kind == "power-sigma" and self.l != 0:
            raise ValueError("power-sigma takes no l parameter")
        if self.kind == "quotient" and not 1 <= self.l < self.k:
            raise ValueError(f"quotient needs 1 <= l < k, got k={self.k}, l={self.l}")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def power_sigma(cls, k, m):
        return cls("power-sigma", k, m)

    @classmethod
    def quotient(cls, k, l, m):
        return cls("quotient", k, m, l)

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        unknown = set(obj) - {"kind", "k", "l", "m"}
        if unknown:
            raise ValueError(f"unknown keys in curvature spec: {sorted(unknown)}")
        return cls(obj["kind"], int(obj["k"]), int(obj["m"]), int(obj.get("l", 0) or 0))

    def to_json(self):
        out = {"kind": self.kind, "k": self.k, "m": self.m}
        if self.kind == "quotient":
            out["l"] = self.l
        return out

    @property
    def degree(self):
        return self.k - self.l

    @property
    def norm_const(self):
        return comb(self.m, self.l) / comb(self.m, self.k)

    @property
    def allows_boundary(self):
        """Whether the continuous extension to the closed cone is evaluated."""
        return self.kind == "power-sigma"

    def __str__(self):
        if self.kind == "power-sigma":
            return f"power-sigma({self.k}), m={self.m}"
        return f"quotient({self.k},{self.l}), m={self.m}"

    # -- evaluation -----------------------------------------------------------

    def _prepare(self, lam, strict):
        lam = np.asarray(lam, dtype=float)
        if lam.shape[-1] != self.m:
            raise DomainError(f"expected {self.m} components, got {lam.shape[-1]}")
        if strict or not self.allows_boundary:
            if np.any(lam <= 0):
                raise DomainError("arguments must lie in the open positive cone")
        elif np.any(lam < 0):
            raise DomainError("arguments must lie in the closed positive cone")
        return -np.sort(-lam, axis=-1)

    def __call__(self, lam):
        lam = self._prepare(lam, strict=False)
        e = _esym(lam, self.k)
        ratio = e[..., self.k] / e[..., self.l] * self.norm_const
        out = ratio ** (1.0 / self.degree)
        return float(out) if out.ndim == 0 else out

    def gradient(self, lam):
        """Return ``(K, mu, lam_sorted)`` for a single point."""
        lam = self._prepare(lam, strict=True)
        if lam.ndim != 1:
            raise ValueError("gradient expects a single point")
        K = self(lam)
        p = self.degree
        sk, sl = _sigma(lam, self.k), _sigma(lam, self.l)
        mu = np.empty(self.m)
        for i in range(self.m):
            g = _sigma_without(lam, self.k - 1, i) / sk
            if self.l > 0:
                g -= _sigma_without(lam, self.l - 1, i) / sl
            mu[i] = K / p * g
        return K, mu, lam

    def hessian(self, lam):
        """Second partials d_i d_j K at ``lam`` (sorted descending)."""
        K, mu, lam = self.gradient(lam)
        p = self.degree
        m = self.m
        g = mu * p / K
        h = np.zeros((m, m))
        for r, sign in ((self.k, 1.0), (self.l, -1.0)):
            if r == 0:
                continue
            sr = _sigma(lam, r)
            s1 = np.array([_sigma_without(lam, r - 1, i) for i in range(m)])
            for i in range(m):
                for j in range(m):
                    s2 = 0.0 if i == j else _sigma_without(lam, r - 2, [i, j])
                    h[i, j] += sign * (s2 / sr - s1[i] * s1[j] / sr**2)
        return K / p * (np.outer(g, g) / p + h)

    def divided_differences(self, lam):
        """``(mu_i - mu_j) / (lam_i - lam_j)`` in closed form.

        ``sigma_{r-1}(lam|i) - sigma_{r-1}(lam|j) = (lam_j - lam_i) sigma_{r-2}(lam|ij)``
        removes the singularity, so the same expression is valid when
        eigenvalues coincide.
        """
        K, _, lam = self.gradient(lam)
        p = self.degree
        m = self.m
        q = np.zeros((m, m))
        sk, sl = _sigma(lam, self.k), _sigma(lam, self.l)
        for i in range(m):
            for j in range(m):
                if i == j:
                    continue
                v = -_sigma_without(lam, self.k - 2, [i, j]) / sk
                if self.l > 0:
                    v += _sigma_without(lam, self.l - 2, [i, j]) / sl
                q[i, j] = K / p * v
        return q


def eval_K(spec, lam):
    """Evaluate a curvature function (builtin, dual or callback) at ``lam``."""
    return spec(lam)


def grad_K(spec, lam):
    """Derivative bundle ``(K, mu_i, mu, muhat)`` at a point of the open cone."""
    K, mu, lam_s = spec.gradient(lam)
    return DerivativeBundle(
        value=float(K),
        lam=lam_s,
        mu=mu,
        trace_mu=float(mu.sum()),
        trace_muhat=float(np.dot(mu, lam_s**2)),
    )


def hessian_K(spec, lam):
    return spec.hessian(lam)


def hessian_quadratic_form(spec, lam, M):
    """Second derivative ``D^2K(A)(M, M)`` of the O(m)-invariant extension.

    ``A`` is ``diag(lam)``; ``M`` is a symmetric matrix written in the same
    basis.  If ``lam`` is not descending, ``M`` is permuted along with it.
    """
    lam = np.asarray(lam, dtype=float)
    M = np.asarray(M, dtype=float)
    if not np.allclose(M, M.T, atol=1e-12 * max(1.0, np.abs(M).max())):
        raise ValueError("M must be symmetric")
    order = np.argsort(-lam, kind="stable")
    lam = lam[order]
    M = M[np.ix_(order, order)]
    H = spec.hessian(lam)
    Q = spec.divided_differences(lam)
    d = np.diag(M)
    val = d @ H @ d
    iu = np.tril_indices(len(lam), -1)
    val += 2.0 * np.sum(Q[iu] * M[iu] ** 2)
    return float(val)


class DualCurvature:
    """``K^(x) = 1 / K(1/x_1, ..., 1/x_m)``."""

    def __init__(self, base):
        self.base = base
        self.m = base.m

    allows_boundary = False

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        if np.any(lam <= 0):
            raise DomainError("dual curvature needs the open positive cone")
        lam = -np.sort(-lam, axis=-1)
        return 1.0 / self.base(1.0 / lam)

    def gradient(self, lam):
        lam = np.asarray(lam, dtype=float)
        if np.any(lam <= 0):
            raise DomainError("dual curvature needs the open positive cone")
        lam = -np.sort(-lam)
        Kb, mub, lam_inv = self.base.gradient(1.0 / lam)
        # base sorts 1/lam descending, i.e. reversed relative to lam
        mub = mub[::-1]
        val = 1.0 / Kb
        mu = val**2 * mub / lam**2
        return val, mu, lam

    def hessian(self, lam):
        return _fd_hessian(self, lam)

    def __repr__(self):
        return f"DualCurvature({self.base!r})"


class CallbackCurvature:
    """User-supplied curvature function, accepted after property checks."""

    def __init__(self, fn, m, name="callback"):
        self.fn = fn
        self.m = m
        self.name = name

    allows_boundary = True

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        if lam.ndim == 1:
            return float(self.fn(-np.sort(-lam)))
        return np.array([float(self.fn(-np.sort(-x))) for x in lam.reshape(-1, self.m)]).reshape(
            lam.shape[:-1]
        )

    def gradient(self, lam):
        lam = -np.sort(-np.asarray(lam, dtype=float))
        return self(lam), _fd_gradient(self, lam), lam

    def hessian(self, lam):
        return _fd_hessian(self, lam)

    def __repr__(self):
        return f"CallbackCurvature({self.name!r}, m={self.m})"


def _fd_gradient(K, lam, rel=1e-6):
    lam = np.asarray(lam, dtype=float)
    g = np.empty(len(lam))
    for i in range(len(lam)):
        h = rel * lam[i]
        e = np.zeros_like(lam)
        e[i] = h
        g[i] = (K(lam + e) - K(lam - e)) / (2 * h)
    return g


def _fd_hessian(K, lam, rel=1e-4):
    lam = -np.sort(-np.asarray(lam, dtype=float))
    m = len(lam)
    H = np.empty((m, m))
    hs = rel * lam
    for i in range(m):
        for j in range(m):
            ei = np.zeros(m)
            ej = np.zeros(m)
            ei[i] = hs[i]
            ej[j] = hs[j]
            H[i, j] = (K(lam + ei + ej) - K(lam + ei - ej) - K(lam - ei + ej) + K(lam - ei - ej)) / (
                4 * hs[i] * hs[j]
            )
    return H


def dual_spec(spec):
    """Return the dual evaluator ``x -> 1 / K(1/x)``."""
    return DualCurvature(spec)


@dataclass
class PropertyReport:
    """Maximum violation per axiom over random samples of the positive cone."""

    spec: str
    samples: int
    seed: int
    tolerance: float
    violations: dict = field(default_factory=dict)

    @property
    def passed(self):
        return {k: bool(v <= self.tolerance) for k, v in self.violations.items()}

    @property
    def ok(self):
        return all(self.passed.values())

    def to_json(self):
        return {
            "spec": self.spec,
            "samples": self.samples,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "violations": {k: float(v) for k, v in self.violations.items()},
            "passed": self.passed,
            "ok": self.ok,
        }


def _eval_many(K, pts):
    try:
        return np.asarray(K(pts), dtype=float).reshape(len(pts))
    except Exception:
        return np.array([K(p) for p in pts], dtype=float)


def verify_properties(spec, sample_count=1000, rng_seed=0, tol=PROPERTY_TOL):
    """Check symmetry, homogeneity, normalization, positivity, monotonicity and concavity.

    Components are drawn log-uniformly from [1e-3, 1e3].  Each violation is
    measured relative to the local scale of K.  Boundary behaviour is checked
    as non-negativity next to the boundary of the cone; strict vanishing on
    the boundary only holds for some builtins and is not required here.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    rng = np.random.default_rng(rng_seed)
    m = spec.m
    lam = 10.0 ** rng.uniform(-3, 3, size=(sample_count, m))
    K0 = _eval_many(spec, lam)
    scale = np.maximum(np.abs(K0), 1e-300)
    v = {}

    perm = np.array([rng.permutation(m) for _ in range(sample_count)])
    lam_p = np.take_along_axis(lam, perm, axis=1)
    v["symmetry"] = float(np.max(np.abs(_eval_many(spec, lam_p) - K0) / scale))

    t = 10.0 ** rng.uniform(-2, 2, size=sample_count)
    Kt = _eval_many(spec, lam * t[:, None])
    v["homogeneity"] = float(np.max(np.abs(Kt - t * K0) / (t * scale)))

    v["normalization"] = abs(float(spec(np.ones(m))) - 1.0)

    pos = float(np.max(np.where(K0 > 0, 0.0, 1.0)))
    near = lam.copy()
    cols = rng.integers(0, m, size=sample_count)
    near[np.arange(sample_count), cols] = 1e-12 * lam.max(axis=1)
    Kb = _eval_many(spec, near)
    bnd = float(np.max(np.maximum(0.0, -Kb) / scale))
    v["positivity"] = max(pos, bnd)

    h = 1e-6 * lam
    mono = 0.0
    for i in range(m):
        e = np.zeros_like(lam)
        e[:, i] = h[:, i]
        d = (_eval_many(spec, lam + e) - _eval_many(spec, lam - e)) / (2 * h[:, i])
        # relative slope along the i-th axis; K is 1-homogeneous so d*lam_i/K is O(1)
        mono = max(mono, float(np.max(np.maximum(0.0, -d * lam[:, i] / scale))))
    v["monotonicity"] = mono

    other = 10.0 ** rng.uniform(-3, 3, size=(sample_count, m))
    Ko = _eval_many(spec, other)
    mid = _eval_many(spec, 0.5 * (lam + other))
    gap = 0.5 * (K0 + Ko) - mid
    v["concavity"] = float(np.max(np.maximum(0.0, gap) / np.maximum(K0, Ko)))

    return PropertyReport(str(spec), sample_count, rng_seed, tol, v)


def _eig_K(spec, A):
    return spec(np.clip(np.linalg.eigvalsh(A), 1e-300, None))


def identity_suite(spec, sample_count=1000, rng_seed=0, spread=1.0):
    """Euler identity, trace bound, gradient and second-derivative checks on random points.

    ``lam`` is drawn log-uniformly from ``[10^-spread, 10^spread]^m``.  The
    gradient is compared with central differences of ``K``; the quadratic
    form ``D^2K(A)(M, M)`` with a second difference of ``t -> K(A + t M)``
    computed through eigenvalues of the perturbed matrix.
    """
    rng = np.random.default_rng(rng_seed)
    m = spec.m
    lam = 10.0 ** rng.uniform(-spread, spread, size=(sample_count, m))
    euler = grad_err = form_err = 0.0
    form_max = -np.inf
    trace_min = np.inf
    for x in lam:
        b = grad_K(spec, x)
        euler = max(euler, abs(float(np.dot(b.mu, b.lam)) - b.value) / max(1.0, b.value))
        trace_min = min(trace_min, b.trace_mu)
        g = _fd_gradient(spec, b.lam)
        grad_err = max(grad_err, float(np.max(np.abs(g - b.mu)) / np.max(np.abs(b.mu))))
        M = rng.normal(size=(m, m))
        M = 0.5 * (M + M.T)
        q = hessian_quadratic_form(spec, b.lam, M)
        A = np.diag(b.lam)
        t = 1e-3 * b.lam.min() / max(1.0, np.abs(M).max())
        fd = (_eig_K(spec, A + t * M) - 2 * b.value + _eig_K(spec, A - t * M)) / t**2
        H = spec.hessian(b.lam)
        Q = spec.divided_differences(b.lam)
        d = np.diag(M)
        # magnitude of the form: its absolute terms, floored by K (|M| / lam_min)^2
        scale = abs(d) @ np.abs(H) @ abs(d) + 2 * np.sum(np.abs(np.tril(Q, -1)) * M**2)
        scale = max(scale, b.value * (np.abs(M).max() / b.lam.min()) ** 2)
        form_err = max(form_err, abs(q - fd) / scale)
        form_max = max(form_max, q / scale)
    return {
        "spec": str(spec),
        "samples": sample_count,
        "seed": rng_seed,
        "euler_residual": float(euler),
        "trace_mu_min": float(trace_min),
        "gradient_rel_err": float(grad_err),
        "form_rel_err": float(form_err),
        "form_max_rel": float(form_max),
    }


def register_curvature(fn, m, name="callback", sample_count=200, rng_seed=0):
    """Wrap a user function as a curvature function after checking the axioms."""
    cand = CallbackCurvature(fn, m, name)
    rep = verify_properties(cand, sample_count, rng_seed)
    if not rep.ok:
        bad = {k: v for k, v in rep.violations.items() if v > rep.tolerance}
        raise DomainError(f"{name} violates curvature-function axioms: {bad}")
    return cand
