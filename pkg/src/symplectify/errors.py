"""Exception types raised across the package.

Every error the CLI maps to an exit code derives from ``SymplectifyError``.
"""


class SymplectifyError(Exception):
    """Base class for all package errors."""


class DimensionError(SymplectifyError, ValueError):
    pass


class SingularMatrixError(SymplectifyError, ZeroDivisionError):
    pass


class InconsistentSystemError(SymplectifyError):
    pass


class SingularMError(SymplectifyError):
    """The evolution matrix is singular, so the criterion does not apply."""


class SingularM21Error(SymplectifyError):
    """The lower-left block of the evolution matrix is singular."""


class NotHamiltonianError(SymplectifyError):
    pass


class ZeroConstantTermError(SymplectifyError):
    pass


class CanonicalNotFoundError(SymplectifyError):
    """No symmetric invertible S1 with S1*B1 alternating and S1*B2 symmetric."""


class NotConservativeError(SymplectifyError):
    pass


class NumericFailure(SymplectifyError):
    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class EomSyntaxError(SymplectifyError):
    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}, column {column})"
        super().__init__(message + loc)
        self.line = line
        self.column = column


class UnboundParameterError(SymplectifyError):
    def __init__(self, name, line=None, column=None):
        super().__init__(f"unbound parameter {name!r}"
                         + (f" (line {line}, column {column})" if line else ""))
        self.name = name
        self.line = line
        self.column = column


class NonlinearVelocityError(SymplectifyError):
    pass
