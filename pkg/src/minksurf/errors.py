"""Exception hierarchy shared across the package."""


class MinksurfError(Exception):
    """Base class for package errors."""


class InputError(MinksurfError):
    """Invalid user input: bad expressions, parameters, or configuration."""


class SingularParamsError(InputError):
    """Fractional-linear parameters with a (near-)zero determinant."""


class NumericError(MinksurfError):
    """Numeric or domain failure on otherwise valid input."""


class EmptyAdmissibleSetError(NumericError):
    """No grid point satisfies the representation's conditions."""


class UnwrapError(NumericError):
    """An angle field could not be made continuous on a component."""


class DisconnectedBasepointError(NumericError):
    """The integration basepoint is outside the admissible set."""
