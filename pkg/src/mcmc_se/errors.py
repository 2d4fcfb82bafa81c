"""Exception hierarchy shared by the estimators and the command line."""


class McmcSeError(Exception):
    """Base class for every error raised by this package."""


class ChainFormatError(McmcSeError, ValueError):
    """Malformed chain input (ragged rows, non-numeric cells, non-finite values)."""


class ChainTooShortError(McmcSeError, ValueError):
    pass


class LagRangeError(McmcSeError, ValueError):
    pass


class InsufficientChainsError(McmcSeError, ValueError):
    pass


class InsufficientBatchesError(McmcSeError, ValueError):
    pass


class InvalidAutocovError(McmcSeError, ValueError):
    pass


class DegenerateVarianceError(McmcSeError, ValueError):
    """A coordinate has zero (or negative) estimated variance.

    The offending coordinate index is kept on ``coordinate``.
    """

    def __init__(self, coordinate, message=None):
        self.coordinate = coordinate
        super().__init__(message or f"degenerate variance in coordinate {coordinate}")


class NotPositiveDefiniteError(McmcSeError, ArithmeticError):
    pass


class SingularEstimateError(McmcSeError, ArithmeticError):
    pass


class AsymmetricMatrixError(McmcSeError, ValueError):
    pass


class NonstationaryError(McmcSeError, ValueError):
    pass


class HadamardConstructionError(McmcSeError, ValueError):
    pass
