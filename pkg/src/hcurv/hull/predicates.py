"""Orientation and rank predicates with an exact rational fallback.

Floating-point determinants are trusted when they clear both the geometric
epsilon and a Hadamard-type forward error bound; otherwise the determinant
is recomputed exactly over the rationals from the (exactly representable)
float inputs.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

EPS = 1e-9
_U = np.finfo(float).eps

__all__ = ["EPS", "exact_det", "det_sign", "orient", "orient_many", "exact_rank", "affine_rank"]


def _to_fraction_rows(M):
    return [[Fraction(float(v)) for v in row] for row in M]


def exact_det(M):
    """Determinant by fraction-free Bareiss elimination over ``Fraction``."""
    A = _to_fraction_rows(M) if not (len(M) and isinstance(M[0][0], Fraction)) else [list(r) for r in M]
    n = len(A)
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if piv is None:
                return Fraction(0)
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def det_sign(M, eps=EPS):
    """Sign of ``det(M)``; exact whenever the float value is not clearly nonzero."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    d = float(np.linalg.det(M))
    bound = 4 * n * _U * float(np.prod(np.linalg.norm(M, axis=1)))
    if abs(d) > max(eps, bound):
        return int(np.sign(d))
    e = exact_det(M)
    return (e > 0) - (e < 0)


def orient(simplex, x, eps=EPS):
    """Side of ``x`` relative to the oriented hyperplane through ``simplex`` (``d`` points in R^d)."""
    S = np.asarray(simplex, dtype=float)
    rows = np.vstack([S, np.asarray(x, dtype=float)[None]])
    M = np.hstack([rows, np.ones((rows.shape[0], 1))])
    return det_sign(M, eps)


def orient_many(simplex, X, eps=EPS):
    """Vectorized ``orient`` over the rows of ``X`` (exact fallback per row)."""
    S = np.asarray(simplex, dtype=float)
    X = np.asarray(X, dtype=float)
    d = S.shape[1]
    base = np.hstack([S, np.ones((d, 1))])
    M = np.empty((len(X), d + 1, d + 1))
    M[:, :d] = base
    M[:, d, :d] = X
    M[:, d, d] = 1.0
    dets = np.linalg.det(M)
    bound = 4 * (d + 1) * _U * np.prod(np.linalg.norm(M, axis=2), axis=1)
    out = np.sign(dets).astype(int)
    unsure = np.abs(dets) <= np.maximum(eps, bound)
    for i in np.nonzero(unsure)[0]:
        e = exact_det(M[i])
        out[i] = (e > 0) - (e < 0)
    return out


def exact_rank(M):
    """Rank of a float matrix computed exactly over the rationals."""
    A = _to_fraction_rows(np.atleast_2d(np.asarray(M, dtype=float)))
    rows, cols = len(A), len(A[0]) if A else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c] / A[r][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
        if r == rows:
            break
    return r


def affine_rank(P):
    """Exact affine rank (dimension of the affine hull) of a point set."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    if len(P) <= 1:
        return 0
    return exact_rank(np.hstack([P, np.ones((len(P), 1))])) - 1
