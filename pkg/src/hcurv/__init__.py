"""Convex hypersurfaces of constant K-curvature in hyperbolic space.

Subpackages are imported on first access so that the command-line entry
point can configure thread limits before numpy loads.
"""

import importlib

__version__ = "0.1.0"

_SUBMODULES = ("curvature", "minkowski", "immersion", "pogorelov", "domains", "plateau", "hull", "io", "errors", "fixtures")

__all__ = ["__version__", *_SUBMODULES]


def __getattr__(name):
    if name in _SUBMODULES:
        return importlib.import_module(f"{__name__}.{name}")
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
