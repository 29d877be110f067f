"""Kernel selection: compiled extension when available, numpy otherwise.

Set ``HCURV_PURE_PYTHON=1`` to force the numpy implementation.
"""

import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("HCURV_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled

        _impl = _compiled
        BACKEND = "cython"
    except ImportError:
        pass


def principal(u, nbr, s, bval, h, impl=None):
    """Principal curvatures and gradient for every unknown, dispatching on dimension."""
    mod = impl or _impl
    u = np.ascontiguousarray(u, dtype=float)
    nbr = np.ascontiguousarray(nbr, dtype=np.int64)
    s = np.ascontiguousarray(s, dtype=float)
    if nbr.shape[1] == 8:
        return mod.principal_2d(u, nbr, s, float(bval), float(h))
    return mod.principal_1d(u, nbr, s, float(bval), float(h))
