"""Numpy reference implementation of the graph shape-operator kernels.

Arm layout (2-D): ``+x, -x, +y, -y, +(1,1), -(1,1), +(1,-1), -(1,-1)``;
(1-D): ``+x, -x``.  ``nbr[k, a]`` is the unknown index of the neighbour
along arm ``a`` or ``-1`` when the arm ends on the Dirichlet boundary at
fraction ``s[k, a]`` of a grid step.
"""

import numpy as np


def _arm_values(u, nbr, bval):
    return np.where(nbr >= 0, u[np.maximum(nbr, 0)], bval)


def _d1(ul, u0, ur, sl, sr, h):
    return (-sr / (sl * (sl + sr)) * ul + (sr - sl) / (sl * sr) * u0 + sl / (sr * (sl + sr)) * ur) / h


def _d2(ul, u0, ur, sl, sr, h):
    return 2.0 * (ul / (sl * (sl + sr)) - u0 / (sl * sr) + ur / (sr * (sl + sr))) / (h * h)


def derivatives_2d(u, nbr, s, bval, h):
    """Gradient ``(N, 2)`` and Hessian entries ``(uxx, uyy, uxy)`` at every unknown."""
    ua = _arm_values(u, nbr, bval)
    ux = _d1(ua[:, 1], u, ua[:, 0], s[:, 1], s[:, 0], h)
    uy = _d1(ua[:, 3], u, ua[:, 2], s[:, 3], s[:, 2], h)
    uxx = _d2(ua[:, 1], u, ua[:, 0], s[:, 1], s[:, 0], h)
    uyy = _d2(ua[:, 3], u, ua[:, 2], s[:, 3], s[:, 2], h)
    dpp = _d2(ua[:, 5], u, ua[:, 4], s[:, 5], s[:, 4], h)
    dpm = _d2(ua[:, 7], u, ua[:, 6], s[:, 7], s[:, 6], h)
    uxy = 0.25 * (dpp - dpm)
    return np.stack([ux, uy], -1), uxx, uyy, uxy


def principal_2d(u, nbr, s, bval, h):
    """Principal curvatures (descending) of the UHS graph ``t = u(x)`` at every unknown."""
    g, uxx, uyy, uxy = derivatives_2d(u, nbr, s, bval, h)
    px, py = g[:, 0], g[:, 1]
    W2 = 1.0 + px * px + py * py
    W = np.sqrt(W2)
    T = uxx + uyy - (px * px * uxx + 2 * px * py * uxy + py * py * uyy) / W2
    D = (uxx * uyy - uxy * uxy) / W2
    disc = np.sqrt(np.maximum(0.25 * T * T - D, 0.0))
    c = u / W
    lam = np.empty((len(u), 2))
    lam[:, 0] = c * (0.5 * T + disc) + 1.0 / W
    lam[:, 1] = c * (0.5 * T - disc) + 1.0 / W
    return lam, g


def principal_1d(u, nbr, s, bval, h):
    ua = _arm_values(u, nbr, bval)
    ux = _d1(ua[:, 1], u, ua[:, 0], s[:, 1], s[:, 0], h)
    uxx = _d2(ua[:, 1], u, ua[:, 0], s[:, 1], s[:, 0], h)
    W = np.sqrt(1.0 + ux * ux)
    lam = (u * uxx / W**3 + 1.0 / W)[:, None]
    return lam, ux[:, None]
