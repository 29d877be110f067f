"""Output formats for Plateau solutions: CSV grid, OBJ mesh, JSON-lines log."""

from __future__ import annotations

import csv
import json

import numpy as np

__all__ = ["write_grid_csv", "write_obj", "write_log_jsonl"]


def write_grid_csv(sol, path):
    """One row per unknown: chart coordinates then the height ``u``."""
    names = ["x", "y"][: sol.m] + ["u"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for x, u in zip(sol.coords, sol.u):
            w.writerow([repr(float(v)) for v in x] + [repr(float(u))])
    return path


def _cells(sol):
    st = sol.stencil
    n = st.grid.n
    pos = -np.ones(n**st.m, dtype=np.int64)
    pos[st.flat] = np.arange(st.N)
    pos = pos.reshape(st.grid.shape)
    a, b = pos[:-1, :-1], pos[1:, :-1]
    c, d = pos[1:, 1:], pos[:-1, 1:]
    ok = (a >= 0) & (b >= 0) & (c >= 0) & (d >= 0)
    return np.stack([a[ok], b[ok], c[ok], d[ok]], -1)


def write_obj(sol, path):
    """Surface ``(x, y, u)`` in upper half-space coordinates.

    Grid cells with four unknown corners are split into two triangles; for
    ``m = 1`` the curve is written as a polyline.
    """
    with open(path, "w") as fh:
        fh.write(f"# hcurv plateau solution, n={sol.config.n}, kappa={sol.config.kappa}\n")
        if sol.m == 1:
            order = np.argsort(sol.coords[:, 0])
            for x, u in zip(sol.coords[order, 0], sol.u[order]):
                fh.write(f"v {x!r} 0.0 {u!r}\n")
            fh.write("l " + " ".join(str(i + 1) for i in range(len(order))) + "\n")
            return path
        for (x, y), u in zip(sol.coords, sol.u):
            fh.write(f"v {x!r} {y!r} {u!r}\n")
        for a, b, c, d in _cells(sol) + 1:
            fh.write(f"f {a} {b} {c}\nf {a} {c} {d}\n")
    return path


def write_log_jsonl(history, path):
    with open(path, "w") as fh:
        for rec in history:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    return path
