"""Convex hulls, faces, the local geodesic property and singular sets in the Klein model."""

from .bodies import CappedBall, ConvexBody, KleinBall, Stadium
from .ebc import EbcEntry, ebc_scan, ebc_test, radius_schedule
from .lgp import LGP, NON_STRICT, STRICT, LgpEntry, boundary_samples, lgp_classify, lgp_hull_consistency, lgp_test
from .polytope import FaceRecord, Polytope, face_identity_residual, faces, hull
from .predicates import EPS, affine_rank, det_sign, exact_det, orient
from .singular import OpenBall, SingularReport, singular_set

__all__ = [
    "EPS",
    "LGP",
    "NON_STRICT",
    "STRICT",
    "CappedBall",
    "ConvexBody",
    "EbcEntry",
    "FaceRecord",
    "KleinBall",
    "LgpEntry",
    "OpenBall",
    "Polytope",
    "SingularReport",
    "Stadium",
    "affine_rank",
    "boundary_samples",
    "det_sign",
    "ebc_scan",
    "ebc_test",
    "exact_det",
    "face_identity_residual",
    "faces",
    "hull",
    "lgp_classify",
    "lgp_hull_consistency",
    "lgp_test",
    "orient",
    "radius_schedule",
    "singular_set",
]
