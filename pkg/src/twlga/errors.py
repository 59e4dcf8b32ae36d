"""Exception hierarchy shared across the library and the service layer."""


class TwlgaError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(TwlgaError, ValueError):
    """An argument violates a documented invariant or dimension contract."""


class CorruptChromosomeError(InvalidArgumentError):
    """A gene string is the wrong length or names a node outside [1, R]."""


class InvalidParamsError(InvalidArgumentError):
    """GA parameters violate their invariants (e.g. p_c1 = 0)."""


class SearchSpaceTooLargeError(TwlgaError):
    """Exhaustive enumeration was requested beyond the configured guard."""


class IllPosedError(TwlgaError, ValueError):
    """Calibration data cannot identify the overhead model parameters."""


class TraceParseError(TwlgaError, ValueError):
    """A sensor trace line failed to parse.

    Carries enough context (source file, line number, column) to point at the
    offending token.
    """

    def __init__(self, message: str, *, source: str | None = None,
                 lineno: int | None = None, column: str | None = None):
        self.source = source
        self.lineno = lineno
        self.column = column
        where = []
        if source is not None:
            where.append(str(source))
        if lineno is not None:
            where.append(f"line {lineno}")
        if column is not None:
            where.append(f"column '{column}'")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class TraceIOError(TwlgaError, OSError):
    """A trace file could not be read or written."""
