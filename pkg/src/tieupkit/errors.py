"""Shared exception types."""


class TieupkitError(Exception):
    """Base class for all package errors."""


class ParseError(TieupkitError):
    """Malformed input file.

    Carries the offending line number (1-based) and, when known, the path,
    so batch tools can point at the exact spot.
    """

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = []
        if path is not None:
            where.append(path)
        if line is not None:
            where.append(f"line {line}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class DanglingReferenceError(TieupkitError):
    """A template object points at an object id that was never emitted."""

    def __init__(self, ref: str):
        self.ref = ref
        super().__init__(f"dangling object reference: {ref}")
