"""Seeded random generators for property and acceptance tests."""
import random

from mlmismatch.model import (
    AttributePath,
    Descriptor,
    DescriptorKind,
    Field,
    Flag,
    Histogram,
    ListValue,
    MapValue,
    Number,
    Schema,
    Text,
    Version,
    make_descriptor_set,
)
from mlmismatch.predicate import BinOp, Call, FlagLit, Neg, Not, NumberLit, PathRef, TextLit

ROOTS = [k.alias for k in DescriptorKind]
EDGE_SETS = [(0.0, 1.0, 2.0, 3.0), (0.0, 2.0, 4.0, 6.0)]
UNITS = [None, None, None, "MB", "GB"]
WORDS = ["accuracy", "latency", "f1", "x", "1.2", "2.0.1"]

# segment name -> kind of value it usually holds
SLOTS = {
    "n1": "num",
    "n2": "num",
    "b": "flag",
    "t": "text",
    "v": "ver",
    "h1": "hist",
    "h2": "hist",
    "s": "schema",
    "l": "list",
    "m": "map",
}


def path(root, *segs):
    return AttributePath(root, segs)


def rand_number(rng):
    value = rng.choice([rng.randint(-3, 3), round(rng.uniform(-3, 3), 2), 0])
    return Number(value, rng.choice(UNITS))


def rand_schema(rng):
    names = rng.sample(["a", "b", "c", "d"], rng.randint(0, 3))
    return Schema(tuple(Field(n, rng.choice(["int", "float", "string", "bool"]), rng.choice([None, "km"])) for n in names))


def rand_value(rng, shape, depth=0):
    if shape == "num":
        return rand_number(rng)
    if shape == "flag":
        return Flag(rng.random() < 0.5)
    if shape == "text":
        return Text(rng.choice(WORDS))
    if shape == "ver":
        return Version(tuple(rng.randint(0, 3) for _ in range(rng.randint(1, 3))))
    if shape == "hist":
        edges = rng.choice(EDGE_SETS)
        return Histogram(edges, tuple(rng.choice([0, 0, 1, 2, 5, 9]) for _ in range(len(edges) - 1)))
    if shape == "schema":
        return rand_schema(rng)
    if shape == "list":
        pool = [Text(w) for w in WORDS[:4]] + [Number(1), Number(2.0)]
        if rng.random() < 0.1:
            pool.append(Flag(True))
        return ListValue(tuple(rng.sample(pool, rng.randint(0, 4))))
    if shape == "map":
        if depth > 1:
            return Number(1)
        return MapValue({"x": rand_value(rng, "num"), "y": rand_value(rng, rng.choice(list(SLOTS.values())), depth + 1)})
    raise AssertionError(shape)


def rand_descriptor_set(rng, p_descriptor=0.8, p_slot=0.7, p_wrong=0.15):
    descriptors = []
    for kind in DescriptorKind:
        if rng.random() > p_descriptor:
            continue
        entries = {}
        for seg, shape in SLOTS.items():
            if rng.random() < p_slot:
                if rng.random() < p_wrong:
                    shape = rng.choice(list(SLOTS.values()))
                entries[seg] = rand_value(rng, shape)
        descriptors.append(Descriptor(kind, f"{kind.alias}-{rng.randint(0, 9)}", MapValue(entries)))
    return make_descriptor_set(descriptors)


def rand_path(rng, shape=None):
    root = rng.choice(ROOTS)
    if rng.random() < 0.03:
        root = "window"
    if shape is None or rng.random() < 0.1:
        seg = rng.choice(list(SLOTS))
    else:
        seg = rng.choice([s for s, k in SLOTS.items() if k == shape])
    if seg == "m" and rng.random() < 0.7:
        return path(root, "m", rng.choice(["x", "y", "z"]))
    if rng.random() < 0.02:
        return path(root, seg, "deeper")
    return path(root, seg)


def rand_num_expr(rng, depth):
    r = rng.random()
    if depth <= 0 or r < 0.3:
        return NumberLit(rng.choice([0, 1, 2, 3, 0.5, 10])) if rng.random() < 0.4 else PathRef(rand_path(rng, "num"))
    r = rng.random()
    if r < 0.45:
        return BinOp(rng.choice("+-*/"), rand_num_expr(rng, depth - 1), rand_num_expr(rng, depth - 1))
    if r < 0.55:
        return Neg(rand_num_expr(rng, depth - 1))
    if r < 0.65:
        return Call("abs", (rand_num_expr(rng, depth - 1),))
    if r < 0.8:
        return Call(rng.choice(["min", "max"]), (rand_num_expr(rng, depth - 1), rand_num_expr(rng, depth - 1)))
    return Call(rng.choice(["psi", "ks"]), (PathRef(rand_path(rng, "hist")), PathRef(rand_path(rng, "hist"))))


def rand_any(rng, depth):
    r = rng.random()
    if r < 0.4:
        return rand_num_expr(rng, depth)
    if r < 0.6:
        return rand_bool_expr(rng, depth)
    if r < 0.8:
        return PathRef(rand_path(rng))
    return TextLit(rng.choice(WORDS))


def rand_bool_expr(rng, depth):
    r = rng.random()
    if depth <= 0 or r < 0.15:
        choice = rng.random()
        if choice < 0.3:
            return FlagLit(rng.random() < 0.5)
        if choice < 0.7:
            return PathRef(rand_path(rng, "flag"))
        return Call(rng.choice(["missing", "exists"]), (PathRef(rand_path(rng)),))
    r = rng.random()
    if r < 0.3:
        return BinOp(rng.choice(["and", "or"]), rand_bool_expr(rng, depth - 1), rand_bool_expr(rng, depth - 1))
    if r < 0.4:
        return Not(rand_bool_expr(rng, depth - 1))
    if r < 0.6:
        return BinOp(rng.choice(["<", "<=", ">", ">="]), rand_num_expr(rng, depth - 1), rand_num_expr(rng, depth - 1))
    if r < 0.7:
        return BinOp(rng.choice(["==", "!="]), rand_any(rng, depth - 1), rand_any(rng, depth - 1))
    if r < 0.78:
        arg = lambda: PathRef(rand_path(rng, "ver")) if rng.random() < 0.7 else TextLit(rng.choice(WORDS))  # noqa: E731
        return Call(rng.choice(["version_lt", "version_eq"]), (arg(), arg()))
    if r < 0.86:
        return Call("schema_compatible", (PathRef(rand_path(rng, "schema")), PathRef(rand_path(rng, "schema"))))
    if r < 0.94:
        return Call("subset", (PathRef(rand_path(rng, "list")), PathRef(rand_path(rng, "list"))))
    return Call(rng.choice(["missing", "exists"]), (PathRef(rand_path(rng)),))


def rand_predicate(rng, depth=4):
    return rand_bool_expr(rng, depth)


def rand_histogram_pair(rng, max_bins=12):
    bins = rng.randint(1, max_bins)
    edges = tuple(sorted(rng.sample(range(-50, 50), bins + 1)))
    def counts():
        c = [rng.choice([0, rng.randint(0, 1000), rng.random() * 10]) for _ in range(bins)]
        if sum(c) == 0:
            c[rng.randrange(bins)] = 1
        return tuple(c)
    return Histogram(edges, counts()), Histogram(edges, counts())


def rand_stream(rng, n=None):
    """Random operational records over features f1/f2 plus the edges to bin them on."""
    from mlmismatch.runtime import OperationalRecord

    edges = {
        "f1": tuple(sorted(rng.sample(range(-10, 11), rng.randint(2, 8)))),
        "f2": (0.0, 0.5, 1.0),
    }
    edges = {k: tuple(float(e) for e in v) for k, v in edges.items()}
    records = []
    seq = rng.randint(0, 5)
    for _ in range(n or rng.randint(1, 300)):
        seq += rng.randint(1, 3)
        features = {}
        if rng.random() < 0.9:
            features["f1"] = rng.choice([rng.uniform(-15, 15), float(rng.randint(-10, 10))])
        if rng.random() < 0.7:
            features["f2"] = rng.random()
        truth = rng.choice([None, 0, 1])
        pred = rng.choice([0, 1]) if truth is not None else None
        records.append(OperationalRecord(seq, features, pred, truth))
    return records, edges
