"""Constant K-curvature graphs over planar domains in the upper half-space."""

from .export import write_grid_csv, write_log_jsonl, write_obj
from .kernels import BACKEND
from .solver import (
    GraphSolution,
    SolveConfig,
    barrier_check,
    boundary_angle,
    default_margin,
    residual,
    shape_from_graph,
    solve,
)
from .stencil import Grid, Stencil, build_stencil

__all__ = [
    "BACKEND",
    "GraphSolution",
    "Grid",
    "SolveConfig",
    "Stencil",
    "barrier_check",
    "boundary_angle",
    "build_stencil",
    "default_margin",
    "residual",
    "shape_from_graph",
    "solve",
    "write_grid_csv",
    "write_log_jsonl",
    "write_obj",
]
