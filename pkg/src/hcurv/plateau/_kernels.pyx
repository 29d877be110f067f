# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled graph shape-operator kernels; same contract as ``_kernels_py``."""

import numpy as np
from libc.math cimport sqrt


cdef inline double _d1(double ul, double u0, double ur, double sl, double sr, double h) nogil:
    return (-sr / (sl * (sl + sr)) * ul + (sr - sl) / (sl * sr) * u0 + sl / (sr * (sl + sr)) * ur) / h


cdef inline double _d2(double ul, double u0, double ur, double sl, double sr, double h) nogil:
    return 2.0 * (ul / (sl * (sl + sr)) - u0 / (sl * sr) + ur / (sr * (sl + sr))) / (h * h)


def principal_2d(double[::1] u, long[:, ::1] nbr, double[:, ::1] s, double bval, double h):
    cdef Py_ssize_t n = u.shape[0], k, a
    lam_arr = np.empty((n, 2))
    g_arr = np.empty((n, 2))
    cdef double[:, ::1] lam = lam_arr
    cdef double[:, ::1] g = g_arr
    cdef double ua[8]
    cdef double px, py, uxx, uyy, uxy, W2, W, T, D, disc, c
    with nogil:
        for k in range(n):
            for a in range(8):
                if nbr[k, a] >= 0:
                    ua[a] = u[nbr[k, a]]
                else:
                    ua[a] = bval
            px = _d1(ua[1], u[k], ua[0], s[k, 1], s[k, 0], h)
            py = _d1(ua[3], u[k], ua[2], s[k, 3], s[k, 2], h)
            uxx = _d2(ua[1], u[k], ua[0], s[k, 1], s[k, 0], h)
            uyy = _d2(ua[3], u[k], ua[2], s[k, 3], s[k, 2], h)
            uxy = 0.25 * (_d2(ua[5], u[k], ua[4], s[k, 5], s[k, 4], h)
                          - _d2(ua[7], u[k], ua[6], s[k, 7], s[k, 6], h))
            W2 = 1.0 + px * px + py * py
            W = sqrt(W2)
            T = uxx + uyy - (px * px * uxx + 2 * px * py * uxy + py * py * uyy) / W2
            D = (uxx * uyy - uxy * uxy) / W2
            disc = 0.25 * T * T - D
            disc = sqrt(disc) if disc > 0 else 0.0
            c = u[k] / W
            lam[k, 0] = c * (0.5 * T + disc) + 1.0 / W
            lam[k, 1] = c * (0.5 * T - disc) + 1.0 / W
            g[k, 0] = px
            g[k, 1] = py
    return lam_arr, g_arr


def principal_1d(double[::1] u, long[:, ::1] nbr, double[:, ::1] s, double bval, double h):
    cdef Py_ssize_t n = u.shape[0], k
    lam_arr = np.empty((n, 1))
    g_arr = np.empty((n, 1))
    cdef double[:, ::1] lam = lam_arr
    cdef double[:, ::1] g = g_arr
    cdef double ul, ur, ux, uxx, W
    with nogil:
        for k in range(n):
            ul = u[nbr[k, 1]] if nbr[k, 1] >= 0 else bval
            ur = u[nbr[k, 0]] if nbr[k, 0] >= 0 else bval
            ux = _d1(ul, u[k], ur, s[k, 1], s[k, 0], h)
            uxx = _d2(ul, u[k], ur, s[k, 1], s[k, 0], h)
            W = sqrt(1.0 + ux * ux)
            lam[k, 0] = u[k] * uxx / (W * W * W) + 1.0 / W
            g[k, 0] = ux
    return lam_arr, g_arr
