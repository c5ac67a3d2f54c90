"""Compatibility builtins usable from predicates (drift statistics live in ``stats``)."""
from __future__ import annotations

from itertools import zip_longest

from ..model import ListValue, Number, Schema, Text, Version

# producer dtype -> consumer dtypes it may feed
COERCIBLE = {
    "int": frozenset({"int", "float"}),
    "float": frozenset({"float"}),
    "string": frozenset({"string"}),
    "bool": frozenset({"bool"}),
}


def _padded(a: Version, b: Version):
    return list(zip_longest(a.components, b.components, fillvalue=0))


def version_lt(a: Version, b: Version) -> bool:
    for x, y in _padded(a, b):
        if x != y:
            return x < y
    return False


def version_eq(a: Version, b: Version) -> bool:
    return all(x == y for x, y in _padded(a, b))


def schema_incompatibilities(producer: Schema, consumer: Schema) -> list[str]:
    """Explain every consumer field the producer cannot supply; empty means compatible."""
    problems = []
    for want in consumer.fields:
        have = producer.get(want.name)
        if have is None:
            problems.append(f"{want.name}: not produced")
        elif want.dtype not in COERCIBLE[have.dtype]:
            problems.append(f"{want.name}: dtype {have.dtype} not coercible to {want.dtype}")
        elif have.unit != want.unit:
            problems.append(f"{want.name}: unit {have.unit or 'none'} != {want.unit or 'none'}")
    return problems


def schema_compatible(producer: Schema, consumer: Schema) -> bool:
    return not schema_incompatibilities(producer, consumer)


def subset(a: ListValue, b: ListValue) -> bool | None:
    """True iff every element of ``a`` occurs in ``b``; None if an element is not Text or Number."""
    if any(not isinstance(x, (Text, Number)) for x in (*a.items, *b.items)):
        return None
    return all(x in b.items for x in a.items)
