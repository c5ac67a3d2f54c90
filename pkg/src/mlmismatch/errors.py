"""Exception hierarchy shared by every module in the package."""
from __future__ import annotations


class MismatchError(Exception):
    """Base class for all errors raised by mlmismatch."""


class DuplicateDescriptor(MismatchError):
    def __init__(self, kind) -> None:
        self.kind = kind
        super().__init__(f"duplicate descriptor for kind {kind.value}")


class TypeTraversal(MismatchError):
    """A path tried to descend through a value that is not a map."""

    def __init__(self, segment: str, path: str | None = None) -> None:
        self.segment = segment
        self.path = path
        where = f" in {path}" if path else ""
        super().__init__(f"cannot descend through non-map segment {segment!r}{where}")


class SyntaxErr(MismatchError):
    """Malformed document or predicate source, with a 1-based location."""

    def __init__(self, message: str, line: int = 1, column: int = 1, expected=()) -> None:
        self.message = message
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        super().__init__(f"{line}:{column}: {message}")


class PredicateError(MismatchError):
    """Semantically invalid predicate: unknown builtin or wrong arity."""

    def __init__(self, message: str, column: int = 1) -> None:
        self.message = message
        self.column = column
        super().__init__(f"column {column}: {message}")


SCHEMA_RULES = frozenset(
    {
        "unknown-kind",
        "bad-histogram",
        "bad-version",
        "duplicate-field",
        "missing-required-key",
        "bad-type",
    }
)


class SchemaViolation(MismatchError):
    def __init__(self, path: str, rule: str, detail: str) -> None:
        if rule not in SCHEMA_RULES:
            raise ValueError(f"unknown schema rule {rule!r}")
        self.path = path
        self.rule = rule
        self.detail = detail
        super().__init__(f"{path}: [{rule}] {detail}")


class RegistryError(MismatchError):
    """A registry definition whose predicate does not parse."""

    def __init__(self, mismatch_id: str, cause: Exception) -> None:
        self.mismatch_id = mismatch_id
        self.cause = cause
        super().__init__(f"mismatch {mismatch_id}: {cause}")


class BinMismatch(MismatchError):
    pass


class DegenerateHistogram(MismatchError):
    pass


class BadEdges(MismatchError):
    pass


class OutOfOrder(MismatchError):
    def __init__(self, sequence: int, last: int) -> None:
        self.sequence = sequence
        self.last = last
        super().__init__(f"record sequence {sequence} is not greater than {last}")
