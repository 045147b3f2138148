"""Exception types shared across the package."""


class AntipodalEndpoints(ValueError):
    """Great-circle interpolation is undefined between antipodal systems."""


class SingularJacobian(RuntimeError):
    """Restricted Jacobian is numerically singular at the current point."""


class NotARoot(ValueError):
    """A point claimed to be a root has a residual above tolerance."""


class DegenerateKernel(RuntimeError):
    """Coefficient matrix has a numerical kernel of dimension != 1."""


class EntropyExhausted(RuntimeError):
    """All fractional coordinates vanished and the fallback mode is 'fail'."""


class RoundsExceeded(RuntimeError):
    """Every precision-doubling round of the deterministic solver failed."""

    def __init__(self, message, per_round=None, precisions=None):
        super().__init__(message)
        self.per_round = per_round or []
        self.precisions = precisions or []


class ContinuationFailed(RuntimeError):
    """A plain (uncapped) continuation run aborted before reaching the target."""
