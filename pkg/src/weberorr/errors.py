"""Exception hierarchy for the weberorr package."""


class WeberOrrError(Exception):
    """Base class for all package errors."""


class DomainError(WeberOrrError, ValueError):
    """An argument violates a documented precondition."""


class PoleProximityError(DomainError):
    """Evaluation requested too close to a gamma-function pole."""


class StripError(DomainError):
    """A Mellin variable lies outside the admissible vertical strip."""


class DivergenceError(WeberOrrError, ArithmeticError):
    """The requested integral is (numerically detected as) divergent."""


class ConvergenceError(WeberOrrError, ArithmeticError):
    """An iteration exhausted its budget without converging."""


class MembershipError(WeberOrrError):
    """A Mellin representation failed its integrability-class flagging."""
