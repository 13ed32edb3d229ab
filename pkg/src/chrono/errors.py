"""Exception hierarchy.

Two families: bad input (``ValidationError``) and failures of a numerical
procedure on valid input (``NumericalError``). The CLI maps them to exit
codes 2 and 1.
"""


class ValidationError(ValueError):
    """Input outside an operation's domain."""


class NumericalError(RuntimeError):
    """A numerical procedure failed on admissible input."""


class SingularMatrixError(NumericalError):
    pass


class NotPositiveDefiniteError(NumericalError):
    pass


class EigenConvergenceError(NumericalError):
    pass


class QuadratureConstructionError(NumericalError):
    pass


class OrthogonalityLossError(NumericalError):
    pass


class DegenerateNormalizationError(NumericalError):
    pass


class RankDeficiencyError(NumericalError):
    """Raised when a square system built from defining conditions is singular."""

    def __init__(self, message, rank=None, size=None, sigma_ratio=None):
        super().__init__(message)
        self.rank = rank
        self.size = size
        self.sigma_ratio = sigma_ratio
