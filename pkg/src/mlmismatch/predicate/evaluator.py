"""Three-valued evaluation of predicates over a descriptor set.

A path absent from the descriptors evaluates to Unknown instead of raising;
arithmetic and comparisons propagate Unknown, and ``and``/``or``/``not`` follow
the strong Kleene tables. Type errors, division by zero and statistic failures
also yield Unknown, each with an explanatory note in the trace.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .. import stats
from ..errors import BinMismatch, DegenerateHistogram
from ..model import (
    AttributePath,
    AttributeValue,
    DescriptorSet,
    Flag,
    Histogram,
    ListValue,
    Number,
    Schema,
    Text,
    Version,
    attribute_lookup,
)
from . import builtins
from .nodes import BinOp, Call, FlagLit, Neg, Node, Not, NumberLit, PathRef, TextLit


class TriBool(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, value: bool) -> "TriBool":
        return cls.TRUE if value else cls.FALSE

    def __and__(self, other: "TriBool") -> "TriBool":
        if self is TriBool.FALSE or other is TriBool.FALSE:
            return TriBool.FALSE
        if self is TriBool.UNKNOWN or other is TriBool.UNKNOWN:
            return TriBool.UNKNOWN
        return TriBool.TRUE

    def __or__(self, other: "TriBool") -> "TriBool":
        if self is TriBool.TRUE or other is TriBool.TRUE:
            return TriBool.TRUE
        if self is TriBool.UNKNOWN or other is TriBool.UNKNOWN:
            return TriBool.UNKNOWN
        return TriBool.FALSE

    def __invert__(self) -> "TriBool":
        if self is TriBool.UNKNOWN:
            return self
        return TriBool.FALSE if self is TriBool.TRUE else TriBool.TRUE


@dataclass(frozen=True)
class EvalTrace:
    result: TriBool
    missing_paths: frozenset[AttributePath] = frozenset()
    bindings: dict[AttributePath, AttributeValue] = field(default_factory=dict)
    notes: tuple[str, ...] = ()


class _Unknown:
    __slots__ = ()

    def __repr__(self) -> str:
        return "UNKNOWN"


UNKNOWN = _Unknown()


def _type_name(value) -> str:
    return type(value).__name__


class _Evaluation:
    def __init__(self, dset: DescriptorSet) -> None:
        self.dset = dset
        self.missing: set[AttributePath] = set()
        self.bindings: dict[AttributePath, AttributeValue] = {}
        self.notes: list[str] = []

    def note(self, message: str) -> _Unknown:
        if message not in self.notes:
            self.notes.append(message)
        return UNKNOWN

    def lookup(self, path: AttributePath):
        value = attribute_lookup(self.dset, path)
        if value is not None:
            self.bindings[path] = value
        return value

    # -- dispatch --------------------------------------------------------

    def eval(self, node: Node):
        if isinstance(node, NumberLit):
            return Number(node.value)
        if isinstance(node, TextLit):
            return Text(node.value)
        if isinstance(node, FlagLit):
            return Flag(node.value)
        if isinstance(node, PathRef):
            value = self.lookup(node.path)
            if value is None:
                self.missing.add(node.path)
                return UNKNOWN
            return value
        if isinstance(node, Neg):
            return self.negate(self.eval(node.operand))
        if isinstance(node, Not):
            return self.from_tri(~self.truth(self.eval(node.operand), "not"))
        if isinstance(node, BinOp):
            return self.binop(node)
        if isinstance(node, Call):
            return self.call(node)
        raise TypeError(f"not a predicate node: {node!r}")

    def truth(self, value, context: str) -> TriBool:
        if value is UNKNOWN:
            return TriBool.UNKNOWN
        if isinstance(value, Flag):
            return TriBool.of(value.value)
        self.note(f"{context}: expected a flag, got {_type_name(value)}")
        return TriBool.UNKNOWN

    @staticmethod
    def from_tri(t: TriBool):
        return UNKNOWN if t is TriBool.UNKNOWN else Flag(t is TriBool.TRUE)

    # -- operators -------------------------------------------------------

    def negate(self, value):
        if value is UNKNOWN:
            return UNKNOWN
        if not isinstance(value, Number):
            return self.note(f"-: expected a number, got {_type_name(value)}")
        return Number(-value.value, value.unit)

    def binop(self, node: BinOp):
        left = self.eval(node.left)
        right = self.eval(node.right)
        op = node.op
        if op == "and":
            return self.from_tri(self.truth(left, "and") & self.truth(right, "and"))
        if op == "or":
            return self.from_tri(self.truth(left, "or") | self.truth(right, "or"))
        if left is UNKNOWN or right is UNKNOWN:
            return UNKNOWN
        if op in ("==", "!="):
            equal = self.equal(left, right)
            if equal is UNKNOWN:
                return UNKNOWN
            return Flag(equal if op == "==" else not equal)
        if not isinstance(left, Number) or not isinstance(right, Number):
            return self.note(f"{op}: expected numbers, got {_type_name(left)} and {_type_name(right)}")
        if op in ("<", "<=", ">", ">="):
            if self.unit_clash(op, left, right):
                return UNKNOWN
            a, b = left.value, right.value
            return Flag({"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op])
        return self.arithmetic(op, left, right)

    def unit_clash(self, op: str, a: Number, b: Number) -> bool:
        if a.unit is not None and b.unit is not None and a.unit != b.unit:
            self.note(f"{op}: unit mismatch {a.unit} vs {b.unit}")
            return True
        return False

    def arithmetic(self, op: str, a: Number, b: Number):
        if op in ("+", "-"):
            if self.unit_clash(op, a, b):
                return UNKNOWN
            value = a.value + b.value if op == "+" else a.value - b.value
            return Number(value, a.unit or b.unit)
        if op == "*":
            if a.unit is not None and b.unit is not None:
                return self.note("*: cannot multiply two unit-annotated quantities")
            return Number(a.value * b.value, a.unit or b.unit)
        if b.value == 0:
            return self.note("/: division by zero")
        if b.unit is not None:
            if a.unit != b.unit:
                return self.note(f"/: unit mismatch {a.unit} vs {b.unit}")
            unit = None
        else:
            unit = a.unit
        return Number(a.value / b.value, unit)

    def equal(self, a, b):
        if type(a) is not type(b):
            return self.note(f"==: cannot compare {_type_name(a)} with {_type_name(b)}")
        if isinstance(a, Number):
            if self.unit_clash("==", a, b):
                return UNKNOWN
            return a.value == b.value
        if isinstance(a, Version):
            return builtins.version_eq(a, b)
        return a == b

    # -- builtins --------------------------------------------------------

    def call(self, node: Call):
        name = node.name
        if name in ("missing", "exists"):
            path = node.args[0].path
            absent = self.lookup(path) is None
            return Flag(absent if name == "missing" else not absent)
        args = [self.eval(a) for a in node.args]
        if any(a is UNKNOWN for a in args):
            return UNKNOWN
        return getattr(self, "call_" + name)(*args)

    def _histograms(self, name: str, p, q) -> bool:
        if isinstance(p, Histogram) and isinstance(q, Histogram):
            return True
        self.note(f"{name}: expected histograms, got {_type_name(p)} and {_type_name(q)}")
        return False

    def _statistic(self, name: str, fn, p, q):
        if not self._histograms(name, p, q):
            return UNKNOWN
        try:
            return Number(fn(p, q))
        except (BinMismatch, DegenerateHistogram) as exc:
            return self.note(f"{name}: {exc}")

    def call_psi(self, p, q):
        return self._statistic("psi", stats.psi, p, q)

    def call_ks(self, p, q):
        return self._statistic("ks", stats.ks, p, q)

    def _version(self, name: str, value):
        if isinstance(value, Version):
            return value
        if isinstance(value, Text):
            try:
                return Version.parse(value.value)
            except ValueError:
                pass
        return self.note(f"{name}: expected a version, got {_type_name(value)}")

    def call_version_lt(self, a, b):
        a, b = self._version("version_lt", a), self._version("version_lt", b)
        if a is UNKNOWN or b is UNKNOWN:
            return UNKNOWN
        return Flag(builtins.version_lt(a, b))

    def call_version_eq(self, a, b):
        a, b = self._version("version_eq", a), self._version("version_eq", b)
        if a is UNKNOWN or b is UNKNOWN:
            return UNKNOWN
        return Flag(builtins.version_eq(a, b))

    def call_schema_compatible(self, producer, consumer):
        if not isinstance(producer, Schema) or not isinstance(consumer, Schema):
            return self.note(
                f"schema_compatible: expected schemas, got {_type_name(producer)} and {_type_name(consumer)}"
            )
        problems = builtins.schema_incompatibilities(producer, consumer)
        for problem in problems:
            self.note(f"schema_compatible: {problem}")
        return Flag(not problems)

    def call_subset(self, a, b):
        if not isinstance(a, ListValue) or not isinstance(b, ListValue):
            return self.note(f"subset: expected lists, got {_type_name(a)} and {_type_name(b)}")
        result = builtins.subset(a, b)
        if result is None:
            return self.note("subset: list elements must be text or numbers")
        return Flag(result)

    def call_abs(self, a):
        if not isinstance(a, Number):
            return self.note(f"abs: expected a number, got {_type_name(a)}")
        return Number(abs(a.value), a.unit)

    def _extremum(self, name: str, pick, a, b):
        if not isinstance(a, Number) or not isinstance(b, Number):
            return self.note(f"{name}: expected numbers, got {_type_name(a)} and {_type_name(b)}")
        if self.unit_clash(name, a, b):
            return UNKNOWN
        return Number(pick(a.value, b.value), a.unit or b.unit)

    def call_min(self, a, b):
        return self._extremum("min", min, a, b)

    def call_max(self, a, b):
        return self._extremum("max", max, a, b)


def evaluate(node: Node, dset: DescriptorSet) -> EvalTrace:
    """Evaluate a parsed predicate; True means the mismatch is present.

    Raises TypeTraversal when a path descends through a non-map attribute.
    """
    ev = _Evaluation(dset)
    value = ev.eval(node)
    result = ev.truth(value, "predicate")
    return EvalTrace(result, frozenset(ev.missing), dict(ev.bindings), tuple(ev.notes))
