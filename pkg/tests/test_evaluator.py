import itertools
import random

import pytest

from gen import rand_descriptor_set, rand_predicate
from mlmismatch.errors import TypeTraversal
from mlmismatch.model import (
    Descriptor,
    DescriptorKind,
    Field,
    Histogram,
    ListValue,
    MapValue,
    Number,
    Schema,
    Text,
    Version,
    make_descriptor_set,
)
from mlmismatch.predicate import Call, PathRef, TriBool, evaluate, parse_predicate
from oracle import Traversal, naive_evaluate

T, F, U = TriBool.TRUE, TriBool.FALSE, TriBool.UNKNOWN


def system(**roots):
    return make_descriptor_set(
        Descriptor(DescriptorKind.from_alias(root), root, MapValue(attrs)) for root, attrs in roots.items()
    )


def run(source, dset=None):
    return evaluate(parse_predicate(source), dset or system())


def test_kleene_tables():
    assert [a & b for a, b in itertools.product([T, F, U], repeat=2)] == [T, F, U, F, F, F, U, F, U]
    assert [a | b for a, b in itertools.product([T, F, U], repeat=2)] == [T, T, T, T, F, U, T, U, U]
    assert [~a for a in (T, F, U)] == [F, T, U]


def test_memory_example():
    dset = system(
        production_environment={"resources": MapValue({"memory_mb": Number(4096)})},
        trained_model={"resources": MapValue({"memory_mb": Number(8192)})},
    )
    t = run("production_environment.resources.memory_mb < trained_model.resources.memory_mb", dset)
    assert t.result is T and not t.missing_paths
    assert {str(p): v for p, v in t.bindings.items()}["trained_model.resources.memory_mb"] == Number(8192)


def test_absent_path_is_unknown_and_recorded():
    t = run("trained_model.resources.memory_mb > 1")
    assert t.result is U
    assert {str(p) for p in t.missing_paths} == {"trained_model.resources.memory_mb"}


def test_and_or_absorb_unknown():
    assert run("a.b > 1 and false").result is F
    assert run("a.b > 1 or true").result is T
    t = run("a.b > 1 or c.d")
    assert t.result is U and len(t.missing_paths) == 2


def test_missing_and_exists_are_never_unknown():
    dset = system(trained_model={"x": Number(1)})
    assert run("missing(trained_model.x)", dset).result is F
    assert run("exists(trained_model.x)", dset).result is T
    t = run("missing(trained_model.y)", dset)
    assert t.result is T and not t.missing_paths


def test_type_mismatch_and_division_notes():
    dset = system(trained_model={"x": Number(1), "t": Text("a")})
    t = run("trained_model.x < trained_model.t", dset)
    assert t.result is U and t.notes
    t = run("trained_model.x / 0 > 1", dset)
    assert t.result is U and any("zero" in n for n in t.notes)


def test_units():
    dset = system(trained_model={"a": Number(4, "GB"), "b": Number(4096, "MB"), "c": Number(2, "GB"), "n": Number(2)})
    assert run("trained_model.a > trained_model.b", dset).result is U
    assert run("trained_model.a > trained_model.c", dset).result is T
    assert run("trained_model.a > trained_model.n", dset).result is T
    assert run("trained_model.a / trained_model.c == 2", dset).result is T
    assert run("trained_model.a * trained_model.c > 0", dset).result is U


def test_statistics_and_errors():
    h1 = Histogram((0.0, 1.0, 2.0), (9, 1))
    h2 = Histogram((0.0, 1.0, 2.0), (1, 9))
    h3 = Histogram((0.0, 1.0, 3.0), (1, 9))
    empty = Histogram((0.0, 1.0, 2.0), (0, 0))
    dset = system(training_data={"p": h1, "q": h2, "r": h3, "e": empty})
    assert run("psi(training_data.p, training_data.q) > 3.5", dset).result is T
    assert run("ks(training_data.p, training_data.q) == 0.8", dset).result is T
    t = run("psi(training_data.p, training_data.r) > 0", dset)
    assert t.result is U and t.notes
    t = run("psi(training_data.p, training_data.e) > 0", dset)
    assert t.result is U and t.notes


def test_versions_schema_subset():
    dset = system(
        trained_model={
            "v": Version((1, 2)),
            "schema": Schema((Field("a", "int"), Field("d", "float", "km"))),
            "metrics": ListValue((Text("accuracy"),)),
        },
        operational_data={
            "schema": Schema((Field("a", "int"), Field("d", "float", "mi"))),
            "good": Schema((Field("a", "int"), Field("d", "float", "km"), Field("z", "bool"))),
        },
        production_environment={"metrics": ListValue((Text("accuracy"), Text("latency")))},
    )
    assert run('version_lt(trained_model.v, "1.10")', dset).result is T
    assert run('version_eq(trained_model.v, "1.2.0")', dset).result is T
    assert run("schema_compatible(operational_data.schema, trained_model.schema)", dset).result is F
    assert run("schema_compatible(operational_data.good, trained_model.schema)", dset).result is T
    assert run("subset(trained_model.metrics, production_environment.metrics)", dset).result is T
    assert run("subset(production_environment.metrics, trained_model.metrics)", dset).result is F


def test_traversal_propagates():
    dset = system(trained_model={"x": Number(1)})
    with pytest.raises(TypeTraversal):
        run("trained_model.x.y > 1", dset)


def test_matches_naive_oracle():
    rng = random.Random(29)
    for _ in range(1500):
        dset, node = rand_descriptor_set(rng), rand_predicate(rng)
        try:
            expected = naive_evaluate(node, dset)
        except Traversal:
            with pytest.raises(TypeTraversal):
                evaluate(node, dset)
            continue
        t = evaluate(node, dset)
        got = {T: True, F: False, U: "unknown"}[t.result]
        assert (got, frozenset(map(str, t.missing_paths))) == expected


def _uses_presence(node):
    if isinstance(node, Call):
        return node.name in ("missing", "exists") or any(_uses_presence(a) for a in node.args)
    children = [getattr(node, name) for name in ("operand", "left", "right") if hasattr(node, name)]
    return any(_uses_presence(c) for c in children)


def _drop(dset, rng):
    """Remove a random subset of top-level attributes."""
    kept = []
    for d in dset.descriptors.values():
        entries = {k: v for k, v in d.attributes.items() if rng.random() < 0.6}
        kept.append(Descriptor(d.kind, d.name, MapValue(entries), d.provenance))
    return make_descriptor_set(kept)


def test_adding_attributes_never_flips_a_known_result():
    rng = random.Random(41)
    checked = 0
    while checked < 500:
        node = rand_predicate(rng)
        if _uses_presence(node):
            continue
        full = rand_descriptor_set(rng, p_descriptor=1.0)
        partial = _drop(full, rng)
        try:
            before, after = evaluate(node, partial).result, evaluate(node, full).result
        except TypeTraversal:
            continue
        checked += 1
        if before is not U:
            assert after is before
