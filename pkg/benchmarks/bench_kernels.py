"""Compare the compiled and numpy curvature kernels on Plateau stencils.

Usage: python benchmarks/bench_kernels.py [--sizes 65 129 257] [--repeat 20]
"""

import argparse
import time

import numpy as np

from hcurv.domains import Ball
from hcurv.plateau import _kernels_py
from hcurv.plateau.kernels import BACKEND, principal
from hcurv.plateau.stencil import Grid, build_stencil


def _best(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[65, 129, 257])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)
    try:
        from hcurv.plateau import _kernels as compiled
    except ImportError:
        compiled = None
    print(f"default backend: {BACKEND}")
    print(f"{'n':>5} {'unknowns':>9} {'python ms':>10} {'cython ms':>10} {'speedup':>8} {'max diff':>10}")
    dom = Ball(1.0)
    R, a = 2 / np.sqrt(3), 1 / np.sqrt(3)
    for n in args.sizes:
        st = build_stencil(dom, Grid.over(dom, n), 0.01, 0.01)
        u = np.sqrt(R * R - np.sum(st.coords**2, axis=1)) - a
        args_k = (u, st.nbr, st.s, st.bval, st.h)
        t_py = _best(lambda: principal(*args_k, impl=_kernels_py), args.repeat)
        lam_py, _ = principal(*args_k, impl=_kernels_py)
        if compiled is None:
            print(f"{n:>5} {st.N:>9} {1e3 * t_py:>10.3f} {'n/a':>10} {'n/a':>8} {'n/a':>10}")
            continue
        t_cy = _best(lambda: principal(*args_k, impl=compiled), args.repeat)
        lam_cy, _ = principal(*args_k, impl=compiled)
        diff = float(np.abs(lam_py - lam_cy).max())
        print(f"{n:>5} {st.N:>9} {1e3 * t_py:>10.3f} {1e3 * t_cy:>10.3f} {t_py / t_cy:>8.1f} {diff:>10.2e}")


if __name__ == "__main__":
    main()
