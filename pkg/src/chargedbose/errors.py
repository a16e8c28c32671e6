"""Exception types raised by the numerical routines."""


class ChargedBoseError(Exception):
    """Base class for all errors raised by this package."""


class NonConvergence(ChargedBoseError):
    """An adaptive integrator could not reach the requested tolerance."""


class GridTooCoarse(ChargedBoseError):
    pass


class BracketNotFound(ChargedBoseError):
    """Shooting endpoints did not produce opposite outcomes."""


class Diverged(ChargedBoseError):
    pass


class TruncationUnconverged(ChargedBoseError):
    """Doubling the Fock cutoff moved the eigenvalue by more than the tolerance."""


class DegenerateField(ChargedBoseError):
    pass


class NotHermitian(ChargedBoseError):
    pass


class NotNormalized(ChargedBoseError):
    pass


class AllWindowsDegenerate(ChargedBoseError):
    pass


class SingularPoint(ChargedBoseError):
    pass


class InvalidT(ChargedBoseError, ValueError):
    pass


class NotFound(ChargedBoseError):
    """No grid value achieved the requested property."""
