"""Shared exception types for the orbigraph package."""


class InputError(ValueError):
    """A supplied value is malformed or out of range."""


class PreconditionError(ValueError):
    """An operation was called on a value violating its stated precondition."""


class CapacityError(RuntimeError):
    """A configured cap (vertices, elements, syllables, depth) was exceeded."""


class ScaleError(RuntimeError):
    """The finite window is too small for the requested computation.

    Raised when an answer would depend on structure beyond the truncation
    frontier; the caller should rebuild with a larger radius or depth.
    """


class ParseError(ValueError):
    """A text-format input could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line
