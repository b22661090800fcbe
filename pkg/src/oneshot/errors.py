"""Exception hierarchy shared by every module."""


class OneShotError(Exception):
    """Base class for all library errors."""


class ValidationError(OneShotError, ValueError):
    """Input violates a type invariant (not Hermitian, negative mass, ...)."""


class DomainError(OneShotError, ValueError):
    """Parameter outside the mathematical domain of an operation."""


class CapacityError(OneShotError, ValueError):
    """Requested object would exceed the configured size limits."""


class SolverError(OneShotError, RuntimeError):
    """An iterative solver failed to reach its stopping criterion.

    The last observed duality gap is kept on the instance so callers can
    decide whether the partial answer is usable.
    """

    def __init__(self, message, last_gap=None, iterations=None):
        super().__init__(message)
        self.last_gap = last_gap
        self.iterations = iterations
