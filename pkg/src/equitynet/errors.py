"""Exception hierarchy.

Every solver failure derives from :class:`EquityNetError`; input-shape
problems additionally derive from :class:`ValueError` so callers that only
care about bad arguments can catch those.
"""


class EquityNetError(Exception):
    """Base class for all package errors."""


class InvalidInputError(EquityNetError, ValueError):
    pass


class EmptySetError(InvalidInputError):
    pass


class NotUnweightedError(InvalidInputError):
    pass


class NegativePerformanceError(InvalidInputError):
    pass


class BadNormalizationError(InvalidInputError):
    pass


class KinkReachedError(EquityNetError):
    """A capped-linear success model was needed at or beyond its cap."""


class NoEquilibriumLinearPError(EquityNetError):
    """Spillovers explode: alpha * beta * rho(Sigma G) >= 1 under linear P."""


class SpectralInfeasibleError(EquityNetError):
    pass


class SingularSubnetworkError(EquityNetError):
    pass


class InvalidActiveSetError(EquityNetError):
    pass


class TooLargeForEnumerationError(EquityNetError):
    pass


class NoInteriorOptimumError(EquityNetError):
    pass


class InfeasibleComplementarityError(EquityNetError):
    pass


class ActiveSetUnstableError(EquityNetError):
    pass


class ConvergenceError(EquityNetError):
    pass
