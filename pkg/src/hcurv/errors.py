"""Exception types shared across the package."""


class HcurvError(Exception):
    """Base class for all package errors."""


class DomainError(HcurvError, ValueError):
    """Argument outside the domain of a curvature function or model."""


class IdealPointError(DomainError):
    """An ideal (boundary-at-infinity) point was passed where an interior point is needed."""


class SignatureError(DomainError):
    """A Lorentz vector has the wrong causal character."""


class RankError(HcurvError):
    """The parametrization is not an immersion at the queried point."""


class NotISCError(HcurvError):
    """Principal curvatures leave the positive cone."""


class EigenbasisError(HcurvError):
    """Principal curvatures are too close for a stable eigenframe."""


class GeometryError(HcurvError):
    """A query point is not where the operation requires it to be."""


class PreconditionError(HcurvError):
    """A structural precondition (convexity, interiority, ...) fails."""


class DomainViolation(HcurvError):
    """Samples fall outside the domain of a barrier function."""

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = list(indices)


class DivergenceError(HcurvError):
    """Newton iteration stagnated."""

    def __init__(self, message, iterate=None, history=None):
        super().__init__(message)
        self.iterate = iterate
        self.history = history or []


class ConvexityBreakdownError(DivergenceError):
    """No damped step keeps the iterate infinitesimally strictly convex."""
