class InputError(ValueError):
    """Raised when arguments violate an operation's preconditions."""


class NumericalError(RuntimeError):
    """Raised when a solver fails to reach an optimal basis."""
