"""Predicate syntax tree, pretty-printer and path collection."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

from ..model import AttributePath

BUILTIN_ARITY = {
    "psi": 2,
    "ks": 2,
    "version_lt": 2,
    "version_eq": 2,
    "schema_compatible": 2,
    "subset": 2,
    "missing": 1,
    "exists": 1,
    "abs": 1,
    "min": 2,
    "max": 2,
}

ARITHMETIC = ("+", "-", "*", "/")
COMPARISONS = ("<", "<=", ">", ">=", "==", "!=")
LOGICAL = ("and", "or")


@dataclass(frozen=True)
class NumberLit:
    value: float


@dataclass(frozen=True)
class TextLit:
    value: str


@dataclass(frozen=True)
class FlagLit:
    value: bool


@dataclass(frozen=True)
class PathRef:
    path: AttributePath


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class Not:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Node", ...]


Node = Union[NumberLit, TextLit, FlagLit, PathRef, Neg, Not, BinOp, Call]

_PREC = {"or": 1, "and": 2, **{op: 4 for op in COMPARISONS}, "+": 5, "-": 5, "*": 6, "/": 6}
_ATOM = 8


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Not):
        return 3
    if isinstance(node, Neg):
        return 7
    return _ATOM


def pretty_print(node: Node) -> str:
    """Render ``node`` as source text with the minimum parentheses needed to reparse it."""
    return _render(node, 0)


def _render(node: Node, need: int) -> str:
    text = _render_bare(node)
    return f"({text})" if _prec(node) < need else text


def _render_bare(node: Node) -> str:
    if isinstance(node, NumberLit):
        return repr(node.value)
    if isinstance(node, TextLit):
        return json.dumps(node.value, ensure_ascii=False)
    if isinstance(node, FlagLit):
        return "true" if node.value else "false"
    if isinstance(node, PathRef):
        return str(node.path)
    if isinstance(node, Neg):
        return "-" + _render(node.operand, 7)
    if isinstance(node, Not):
        return "not " + _render(node.operand, 3)
    if isinstance(node, Call):
        return f"{node.name}({', '.join(_render(a, 0) for a in node.args)})"
    p = _PREC[node.op]
    # comparisons do not associate, so both sides need a tighter operand
    left_need = p + 1 if node.op in COMPARISONS else p
    return f"{_render(node.left, left_need)} {node.op} {_render(node.right, p + 1)}"


def collect_paths(node: Node) -> frozenset[AttributePath]:
    found: set[AttributePath] = set()
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, PathRef):
            found.add(n.path)
        elif isinstance(n, (Neg, Not)):
            stack.append(n.operand)
        elif isinstance(n, BinOp):
            stack.extend((n.left, n.right))
        elif isinstance(n, Call):
            stack.extend(n.args)
    return frozenset(found)
