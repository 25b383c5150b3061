"""Exception hierarchy shared by all bethelab modules."""


class BetheLabError(Exception):
    """Base class for every error raised by this package."""


class PoleCollision(BetheLabError, ZeroDivisionError):
    """A rational function was evaluated at one of its poles."""


class InvalidQ(BetheLabError, ValueError):
    """The deformation parameter is zero (or otherwise unusable)."""


class CardinalityMismatch(BetheLabError, ValueError):
    pass


class DimensionMismatch(BetheLabError, ValueError):
    pass


class RankMismatch(BetheLabError, ValueError):
    pass


class SizeGuardExceeded(BetheLabError, ValueError):
    """A brute-force routine was asked for more work than its guard allows."""


class ZeroParameter(BetheLabError, ValueError):
    pass


class ZeroVector(BetheLabError, ArithmeticError):
    pass


class NoConvergence(BetheLabError, RuntimeError):
    pass


class DegenerateJacobian(BetheLabError, ArithmeticError):
    pass


class ConfigError(BetheLabError, ValueError):
    pass
