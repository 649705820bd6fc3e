"""Exception types and source positions shared across the toolkit."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class SourceSpan:
    """1-based position of a token or error in an input text."""

    line: int
    column: int
    length: int = 1

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class PdlslError(Exception):
    """Base class for all toolkit errors."""


class ZeroVector(PdlslError):
    """An angle or direction was requested for a zero-length vector."""


class CoincidentPoints(PdlslError):
    """A relative direction was requested for two identical points."""


class ParseError(PdlslError):
    """Bad concrete syntax. Carries the offending span and, when known,
    the set of token kinds that would have been accepted."""

    def __init__(self, message: str, span: SourceSpan, expected: frozenset[str] = frozenset()):
        super().__init__(message)
        self.span = span
        self.expected = expected

    def __str__(self) -> str:
        base = f"{self.span}: {self.args[0]}"
        if self.expected:
            base += f" (expected {', '.join(sorted(self.expected))})"
        return base


class UnknownArticulator(ParseError):
    """A token in articulator position is not one of D, W, R, L."""


class UnknownDirection(ParseError):
    """A token in direction position is not one of the eight compass names."""


class DuplicateSign(ParseError):
    """A lexicon defines the same sign name twice."""

    def __init__(self, name: str, first: SourceSpan, second: SourceSpan):
        super().__init__(f"duplicate sign {name!r} (first defined at {first})", second)
        self.name = name
        self.first = first
        self.second = second


class SchemaError(PdlslError):
    """A structured input file violates its schema. `path` is a
    JSON-pointer-style location of the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '/'}: {message}")
        self.path = path


class ConfigError(PdlslError):
    """Bad run configuration (unknown keys, bad values). Treated as a
    usage error by the command line."""


class EmptySequence(PdlslError):
    """A tracking sequence with no frames was given to segmentation."""


class NoKeyPosture(PdlslError):
    """Segmentation produced no key posture to build states from."""


class NonMonotoneTimestamps(PdlslError):
    """Frame indices decrease within a tracking sequence; unrecoverable."""

    def __init__(self, position: int, t_prev: int, t_next: int):
        super().__init__(f"frame index {t_next} after {t_prev} at position {position}")
        self.position = position


class UnknownState(PdlslError):
    """A state id outside the model's state range was referenced."""


class UngroundedFormula(PdlslError):
    """A formula still mentions the dominant/weak aliases where a grounded
    formula is required."""


class AliasCollision(PdlslError):
    """Grounding collapsed the two articulators of a pairwise atom onto the
    same hand (e.g. touch(D,R) for a right-dominant signer)."""
