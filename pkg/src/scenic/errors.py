"""Exception types shared across the package."""

from __future__ import annotations


class ScenicError(Exception):
    """Base class for all errors raised by this package."""


class CoincidentPair(ScenicError):
    """Two points are too close for their perpendicular bisector to exist."""


class EmptyInput(ScenicError):
    pass


class DegenerateBox(ScenicError):
    pass


class DegenerateInput(ScenicError):
    """Fewer than three points, or all of them collinear."""


class EmptyGraph(ScenicError):
    """The scenic graph has no nodes (or no edges, where edges are needed)."""


class Unreachable(ScenicError):
    pass


class NoCandidate(ScenicError):
    pass


class KTooLarge(ScenicError):
    pass


class ValidationError(ScenicError, ValueError):
    pass


class ParseError(ScenicError, ValueError):
    def __init__(self, message: str, *, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
