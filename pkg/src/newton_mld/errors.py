class InputError(ValueError):
    """Malformed or out-of-contract input."""


class SupportError(InputError):
    """A support set that cannot describe a hypersurface germ through the origin."""


class ParseError(InputError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class EnumerationTooLarge(InputError):
    pass


class UnboundedRelaxation(RuntimeError):
    """The LP relaxation of a minimization has no lower bound."""
