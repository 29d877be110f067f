"""Exterior ball condition for planar domains on the ideal boundary.

A ball ``B(c, r)`` with ``|c - x| = r`` touches ``x`` and avoids the open
domain exactly when ``sd(c) >= r``, the signed distance being exact for
the shipped domain types.  Certified balls are double-checked by sampling
the ball against the signed distance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["EbcEntry", "radius_schedule", "ebc_test", "ebc_scan"]


@dataclass
class EbcEntry:
    point: np.ndarray
    passed: bool
    center: np.ndarray | None
    radius: float | None
    certificate: dict

    def to_json(self):
        return {
            "point": self.point.tolist(),
            "passed": self.passed,
            "center": None if self.center is None else self.center.tolist(),
            "radius": self.radius,
            "certificate": self.certificate,
        }


def radius_schedule(domain, r_min=1e-3, factor=2.0):
    """Radii from the bounding-box diagonal down to ``r_min`` (inclusive), geometric."""
    r = domain.diameter()
    out = []
    while r > r_min:
        out.append(r)
        r /= factor
    out.append(r_min)
    return out


def _ball_samples(c, r, k):
    t = 2 * np.pi * np.arange(k) / k
    rings = [c + rr * np.stack([np.cos(t), np.sin(t)], -1) for rr in (r, 0.5 * r)]
    return np.vstack(rings + [c[None]])


def ebc_test(domain, x, radii=None, directions=720, tol=1e-9, verify_samples=64):
    """First certified exterior ball at ``x``, or a failure certificate.

    Candidate centres are ``x + r w`` over ``directions`` unit vectors plus
    the outward normal from the signed distance.  The certificate records,
    per radius, the best margin ``sd(c) - r`` (negative: every tried ball
    meets the domain).
    """
    x = np.asarray(x, dtype=float)
    radii = radius_schedule(domain) if radii is None else list(radii)
    t = 2 * np.pi * np.arange(directions) / directions
    W = np.stack([np.cos(t), np.sin(t)], -1)
    g = domain.gradient(x[None])[0]
    if np.all(np.isfinite(g)) and np.linalg.norm(g) > 0:
        W = np.vstack([g / np.linalg.norm(g), W])
    best = []
    for r in radii:
        C = x + r * W
        margin = domain.sd(C) - r
        k = int(np.argmax(margin))
        best.append({"radius": r, "best_margin": float(margin[k]), "direction": W[k].tolist()})
        if margin[k] >= -tol * max(1.0, r):
            c = C[k]
            # sampled confirmation that the closed ball misses the open domain
            S = _ball_samples(c, r * (1 - 1e-9), verify_samples)
            if np.all(domain.sd(S) >= -tol * max(1.0, r)):
                return EbcEntry(x, True, c, float(r), {"tried": best, "directions": len(W), "tolerance": tol})
    return EbcEntry(
        x,
        False,
        None,
        None,
        {"tried": best, "directions": len(W), "max_radius": float(max(radii)), "min_radius": float(min(radii)), "tolerance": tol},
    )


def ebc_scan(domain, points, **kw):
    """``ebc_test`` at every point; returns the entries and the overall verdict."""
    entries = [ebc_test(domain, p, **kw) for p in np.atleast_2d(points)]
    return entries, all(e.passed for e in entries)
