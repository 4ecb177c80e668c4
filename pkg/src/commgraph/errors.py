"""Exception types shared across the package."""


class CommGraphError(Exception):
    """Base class for all package errors."""


class InvalidArgument(CommGraphError, ValueError):
    pass


class NotPAdicInteger(CommGraphError, ValueError):
    """A rational with negative p-adic valuation was reduced mod p."""


class HypothesisViolated(CommGraphError, ValueError):
    """An operation's algebraic precondition does not hold for the input."""


class ShapeMismatch(CommGraphError, ValueError):
    pass


class BudgetExceeded(CommGraphError):
    """The requested exhaustive computation is larger than the allowed budget."""


class NotFound(CommGraphError):
    """A bounded search finished without a witness."""


class SoundnessError(CommGraphError):
    """Rule contributions intersected to an empty interval."""


class SingularMatrix(CommGraphError, ArithmeticError):
    pass
