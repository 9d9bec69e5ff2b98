"""Exception hierarchy shared by every module."""


class TropError(Exception):
    """Base class for library errors."""

    code = "error"


class DimensionError(TropError, ValueError):
    code = "dimension"


class InputError(TropError, ValueError):
    code = "input"


class SpectrumError(TropError, ValueError):
    """Raised when a spectral precondition (on the maximum cycle mean) fails."""

    code = "spectrum"


class PeriodicAmbiguityError(TropError):
    """The discrete logarithm cannot be recovered when the cycle mean is 0."""

    code = "periodic-ambiguity"


class NotFoundError(TropError):
    code = "not-found"


class ProtocolInvariantError(TropError, AssertionError):
    code = "protocol-invariant"


class AttackFailure(TropError):
    """Key recovery failed; ``diagnostics`` holds whatever was learned."""

    code = "attack-failure"

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ParseError(TropError, ValueError):
    """Malformed matrix document.

    ``line``/``column`` locate the offending text (1-based) when known;
    ``entry`` gives the (row, col) matrix position for bad values.
    """

    code = "parse"

    def __init__(self, message, line=None, column=None, entry=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if entry is not None:
            where.append(f"entry ({entry[0] + 1},{entry[1] + 1})")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.line = line
        self.column = column
        self.entry = entry
