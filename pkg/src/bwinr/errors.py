"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: ConfigurationError -> 1,
ImageIOError -> 2, NumericalError (and subclasses) -> 3.
"""


class BwinrError(Exception):
    """Base class for all package errors."""


class ShapeError(BwinrError, ValueError):
    """Operand dimensions are inconsistent."""


class InvalidInputError(BwinrError, ValueError):
    """Input violates an operation's precondition (e.g. asymmetry)."""


class ConfigurationError(BwinrError, ValueError):
    """Bad experiment or network configuration."""


class UnsupportedActivationError(BwinrError, ValueError):
    """Operation is undefined for this activation kind."""


class ImageIOError(BwinrError, IOError):
    """Unreadable, unwritable or malformed image file."""


class NumericalError(BwinrError, ArithmeticError):
    """Numerical failure (non-finite values, failed convergence)."""


class DivergenceError(NumericalError):
    """Training loss exceeded the divergence threshold.

    Carries the log collected up to the failing epoch in ``log``.
    """

    def __init__(self, message, log=None):
        super().__init__(message)
        self.log = log
