"""Exception types shared across the package."""


class InputError(ValueError):
    """Arguments violate a documented precondition (bad sizes, out of range)."""


class DomainError(ValueError):
    """The operation is undefined for this (otherwise well-formed) input."""


class PosetFormatError(InputError):
    """A posetb or GLR file could not be parsed."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class IrreversibleError(DomainError):
    """A pair set cannot be reversed by a single linear extension.

    ``cycle`` holds a directed cycle of incomparable pairs (0-based) that
    certifies the obstruction.
    """

    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__(f"pair set is not reversible; conflict cycle {self.cycle}")
