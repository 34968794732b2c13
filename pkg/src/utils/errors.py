"""Exception hierarchy shared by the divkit packages."""


class DivkitError(Exception):
    """Base class for every error raised by divkit."""


class InvalidInputError(DivkitError, ValueError):
    """Input values violate a precondition (negative weights, bad names, ...)."""


class SpaceMismatchError(InvalidInputError):
    """Two operands live on different atom spaces."""


class AbsoluteContinuityError(InvalidInputError):
    """A measure charges atoms that the reference measure does not."""


class InvalidPartitionError(InvalidInputError):
    """A family of functions is not a partition of unity."""


class NotInvariantError(InvalidInputError):
    """A measure is not invariant under the dynamical system's map."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class ExtendedArithmeticError(DivkitError, ArithmeticError):
    """Indeterminate extended-real arithmetic such as +inf + (-inf)."""


class NonConvergenceError(DivkitError, ArithmeticError):
    """A numeric iteration exhausted its budget before reaching tolerance."""

    def __init__(self, message, best_value=None, iterations=None):
        super().__init__(message)
        self.best_value = best_value
        self.iterations = iterations


class PropertyViolation(DivkitError, AssertionError):
    """A checked identity or inequality does not hold."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
