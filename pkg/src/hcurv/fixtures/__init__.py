"""Shipped JSON fixtures."""

import json
from importlib import resources

__all__ = ["load_fixture", "available"]


def available():
    return sorted(p.name[:-5] for p in resources.files(__name__).iterdir() if p.name.endswith(".json"))


def load_fixture(name):
    path = resources.files(__name__) / f"{name}.json"
    if not path.is_file():
        raise FileNotFoundError(f"no fixture named {name!r}; available: {available()}")
    return json.loads(path.read_text())
