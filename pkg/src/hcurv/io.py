"""CSV and OBJ readers/writers for point clouds, domains, surface samples and hulls.

Point-cloud CSV files start with a comment naming the model,
``# model: hyperboloid|klein|uhs``, followed by one point per row.
"""

from __future__ import annotations

import numpy as np

from .minkowski import hyperboloid_to_klein, klein_to_hyperboloid, uhs_to_hyperboloid

__all__ = [
    "MODELS",
    "read_points_csv",
    "write_points_csv",
    "points_to_klein",
    "read_polygon_csv",
    "write_surface_csv",
    "write_hull_obj",
]

MODELS = ("hyperboloid", "klein", "uhs")


def _header_model(line):
    body = line.lstrip("#").strip()
    key, _, value = body.partition(":")
    if key.strip().lower() != "model":
        return None
    return value.strip().lower()


def read_points_csv(path):
    """``(model, points)`` from a point-cloud CSV; raises ``ValueError`` with a line number on bad rows."""
    model = None
    rows = []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s:
                continue
            if s.startswith("#"):
                mdl = _header_model(s)
                if mdl is not None:
                    if mdl not in MODELS:
                        raise ValueError(f"{path}:{lineno}: unknown model {mdl!r}, expected one of {MODELS}")
                    model = mdl
                continue
            try:
                vals = [float(v) for v in s.split(",")]
            except ValueError:
                if not rows:
                    continue  # column header row
                raise ValueError(f"{path}:{lineno}: non-numeric value in {s!r}") from None
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise ValueError(f"{path}:{lineno}: expected {width} columns, got {len(vals)}")
            rows.append(vals)
    if model is None:
        raise ValueError(f"{path}:1: missing '# model: ...' header")
    if not rows:
        raise ValueError(f"{path}: no points")
    return model, np.array(rows)


def write_points_csv(path, points, model="klein"):
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    P = np.atleast_2d(points)
    with open(path, "w") as fh:
        fh.write(f"# model: {model}\n")
        fh.write(",".join(f"x{i}" for i in range(P.shape[1])) + "\n")
        for p in P:
            fh.write(",".join(repr(float(v)) for v in p) + "\n")


def points_to_klein(model, P):
    """Klein coordinates of points given in ``model`` (ideal points allowed for Klein input)."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    if model == "klein":
        return P
    if model == "hyperboloid":
        return hyperboloid_to_klein(P)
    if model == "uhs":
        return hyperboloid_to_klein(uhs_to_hyperboloid(P))
    raise ValueError(f"unknown model {model!r}")


def klein_to_model(model, Y):
    if model == "klein":
        return Y
    X = klein_to_hyperboloid(Y)
    if model == "hyperboloid":
        return X
    raise ValueError(f"conversion to {model!r} is not supported here")


def read_polygon_csv(path):
    """Polygon vertices ``x,y`` (one per row, optional header)."""
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            try:
                vals = [float(v) for v in s.split(",")]
            except ValueError:
                if not rows:
                    continue
                raise ValueError(f"{path}:{lineno}: non-numeric value in {s!r}") from None
            if len(vals) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 columns, got {len(vals)}")
            rows.append(vals)
    if len(rows) < 3:
        raise ValueError(f"{path}: a polygon needs at least 3 vertices")
    return np.array(rows)


def write_surface_csv(path, chart, points):
    """Surface samples: chart coordinates ``u_i`` then hyperboloid coordinates ``x_j``."""
    U = np.atleast_2d(chart)
    X = np.atleast_2d(points)
    with open(path, "w") as fh:
        cols = [f"u{i}" for i in range(U.shape[1])] + [f"x{j}" for j in range(X.shape[1])]
        fh.write(",".join(cols) + "\n")
        for u, x in zip(U, X):
            fh.write(",".join(repr(float(v)) for v in np.concatenate([u, x])) + "\n")


def write_hull_obj(poly, path):
    """Triangulated boundary of a full-dimensional 3D hull (facets fanned around their centroids' angle order)."""
    if poly.dim != 3 or not poly.full_dim:
        raise ValueError("OBJ export needs a full-dimensional hull in 3D")
    verts = poly.vertex_indices
    pos = {int(v): k + 1 for k, v in enumerate(verts)}
    with open(path, "w") as fh:
        for v in verts:
            fh.write("v " + " ".join(f"{c:.12g}" for c in poly.points[v]) + "\n")
        for F in poly.facets:
            ids = np.array(sorted(F.vertices))
            P = poly.points[ids]
            c = P.mean(axis=0)
            n = np.asarray(F.normal)
            e1 = P[0] - c
            e1 /= np.linalg.norm(e1)
            e2 = np.cross(n, e1)
            order = ids[np.argsort(np.arctan2((P - c) @ e2, (P - c) @ e1))]
            for a, b in zip(order[1:-1], order[2:]):
                fh.write(f"f {pos[int(order[0])]} {pos[int(a)]} {pos[int(b)]}\n")
