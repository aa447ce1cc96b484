"""Exception hierarchy shared by all kposi modules."""


class KposiError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(KposiError, ValueError):
    """Shapes, index ranges or orders are inconsistent."""


class CapacityError(DimensionError):
    """A compound (or index enumeration) would exceed the configured size cap."""


class PreconditionError(KposiError, ValueError):
    """An input does not satisfy the mathematical precondition of an operation."""


class DegenerateSpectrumError(PreconditionError):
    """|lambda_k| and |lambda_{k+1}| are too close to separate the spectrum."""

    def __init__(self, message, moduli=None, k=None):
        super().__init__(message)
        self.moduli = moduli
        self.k = k


class ConvergenceError(KposiError, RuntimeError):
    """An iterative method did not reach its tolerance."""


class NotFoundError(KposiError, LookupError):
    """A search (generation attempt, hitting time) came up empty."""

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


class ParseError(KposiError, ValueError):
    """Malformed matrix / vector / profile file."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc = f" ({loc})"
        super().__init__(message + loc)
        self.line = line
        self.column = column
