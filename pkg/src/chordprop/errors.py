"""Exception hierarchy.

Every library error carries a machine-readable ``code`` (the class name) and,
when raised through the text format, a source ``span``.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ChordpropError(ValueError):
    """Base class; ``code`` is stable and used in CLI/JSON output."""

    def __init__(self, message: str, *, span: Span | None = None, **details):
        super().__init__(message)
        self.message = message
        self.span = span
        self.details = details

    @property
    def code(self) -> str:
        return type(self).__name__

    def with_span(self, span: Span | None) -> "ChordpropError":
        if self.span is None:
            self.span = span
        return self

    def __str__(self) -> str:
        if self.span is None:
            return f"{self.code}: {self.message}"
        return f"{self.code} at {self.span}: {self.message}"

    def as_dict(self) -> dict:
        out = {"code": self.code, "message": self.message}
        if self.span is not None:
            out["line"] = self.span.line
            out["column"] = self.span.column
        return out


# fat graphs
class DuplicateHalfEdge(ChordpropError):
    pass


class FixedPointInPairing(ChordpropError):
    pass


class MissingHalfEdge(ChordpropError):
    pass


class EmptyVertex(ChordpropError):
    pass


class DisconnectedGraph(ChordpropError):
    pass


class EmptyGraph(ChordpropError):
    pass


class LoopContraction(ChordpropError):
    pass


class DegenerateContraction(ChordpropError):
    pass


class UnknownEdge(ChordpropError):
    pass


class LowValence(ChordpropError):
    pass


class BoundExceeded(ChordpropError):
    pass


# chord diagrams
class GhostNotCircles(ChordpropError):
    pass


class RoleCountMismatch(ChordpropError):
    pass


class NonpositiveLength(ChordpropError):
    pass


class MarkingOutOfRange(ChordpropError):
    pass


class TypeMismatch(ChordpropError):
    pass


class UnreducedInput(ChordpropError):
    pass


class CoincidentAttachment(ChordpropError):
    pass


# degrees and signs
class BadParameter(ChordpropError):
    pass


class AmbientMismatch(ChordpropError):
    pass


class BadSphereDim(ChordpropError):
    pass


class QMustBePositive(ChordpropError):
    pass


# algebras
class DegreeViolation(ChordpropError):
    pass


class NoUnit(ChordpropError):
    pass


class NonHomogeneous(ChordpropError):
    pass


class UnknownBasisElement(ChordpropError):
    pass


class DuplicateBasisElement(ChordpropError):
    pass


# text format
class DslSyntaxError(ChordpropError):
    @property
    def code(self) -> str:
        return "SyntaxError"


class WrongKind(ChordpropError):
    pass
