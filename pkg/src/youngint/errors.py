"""Exception hierarchy shared by all modules (and mapped to CLI exit codes)."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class PreconditionError(ValueError):
    """The inputs violate a precondition such as sharing a discontinuity."""


class BudgetError(RuntimeError):
    """A tolerance could not be met within the allowed work budget.

    ``value`` and ``bound`` carry the best estimate reached so far.
    """

    def __init__(self, message, value=None, bound=None):
        super().__init__(message)
        self.value = value
        self.bound = bound


class NonConvergenceError(BudgetError):
    """Fixed-point iteration did not settle within ``max_iter`` steps."""

    def __init__(self, message, iterate=None, residual=None, history=None):
        super().__init__(message, value=iterate, bound=residual)
        self.iterate = iterate
        self.residual = residual
        self.history = history or []
