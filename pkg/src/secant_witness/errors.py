"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-domain arguments."""


class PreconditionError(RuntimeError):
    """A mathematical precondition of an operation does not hold for the input."""


class InconsistencyError(RuntimeError):
    """Input data admit no solution, e.g. moments not produced by any mixture."""
