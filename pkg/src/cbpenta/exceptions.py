"""Exception types raised by cbpenta."""


class SingularSystemError(ArithmeticError):
    """A matrix that has to be inverted is numerically singular.

    For the cyclic solver this usually means a bad choice of the auxiliary
    parameters, although the system itself may also be singular.
    """


class SingularBlockError(SingularSystemError):
    """Pivot breakdown while inverting an m x m block.

    ``stage`` is the 1-based block row of the failing inversion, or None
    when the block was inverted outside of a factorization.
    """

    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage


class SingularAuxiliaryError(SingularSystemError):
    """The 2m x 2m corner-coupling system could not be factored."""


class FormatError(ValueError):
    """Malformed system or solution file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
