"""Exception types shared across the package."""


class ChisoError(Exception):
    """Base class for package-specific failures."""


class GroupMembershipError(ChisoError, ValueError):
    """A matrix does not preserve the Hermitian form within tolerance."""


class EigenConvergenceError(ChisoError, RuntimeError):
    """The iterative eigensolver failed to converge within its sweep cap."""


class AmbiguityError(ChisoError, RuntimeError):
    """A tolerance-based decision sits too close to its threshold to call.

    Raised instead of guessing: callers can retry with different tolerances
    or report the input as numerically borderline.
    """


class DocumentError(ChisoError, ValueError):
    """A matrix document or report failed to parse or validate."""
