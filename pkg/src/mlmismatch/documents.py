"""Reading, validating and writing descriptor and registry documents (JSON).

Attribute values map onto JSON as follows. Bare numbers, strings and booleans
become Number, Text and Flag; arrays become lists and objects become maps.
An object with exactly one reserved key whose body has the matching shape is
a typed leaf instead::

    {"histogram": {"bin_edges": [0, 1, 2], "counts": [3, 4]}}
    {"version": "1.2.3"}
    {"schema": [{"name": "x", "dtype": "float", "unit": "km"}]}
    {"quantity": {"value": 512, "unit": "MB"}}

Any other body leaves the object an ordinary map, so a map holding a single
``histogram`` entry is written ``{"histogram": {"histogram": {...}}}``.
"""
from __future__ import annotations

import json
import math
import re
from pathlib import Path
from typing import Any

from .errors import PredicateError, RegistryError, SchemaViolation, SyntaxErr
from .model import (
    DTYPES,
    METADATA_KEYS,
    WINDOW_ROOT,
    AttributePath,
    AttributeValue,
    Descriptor,
    DescriptorKind,
    DescriptorSet,
    Field,
    Flag,
    Histogram,
    ListValue,
    MapValue,
    Number,
    Schema,
    Text,
    Version,
    histogram_problem,
    make_descriptor_set,
)
from .predicate import BinOp, Call, Neg, Node, Not, PathRef, parse_predicate
from .registry import PHASES, Metadata, MismatchDefinition, MismatchRegistry

API_VERSION = "v1"
TAGS = ("histogram", "version", "schema", "quantity")
_KEY = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


# -- raw JSON ----------------------------------------------------------------


class _DuplicateKey(Exception):
    def __init__(self, key: str) -> None:
        self.key = key


def _pairs(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise _DuplicateKey(key)
        out[key] = value
    return out


def _reject_constant(name: str):
    raise ValueError(f"non-finite number {name} is not allowed")


def load_json(document: str) -> Any:
    try:
        return json.loads(document, object_pairs_hook=_pairs, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise SyntaxErr(exc.msg, exc.lineno, exc.colno) from None
    except _DuplicateKey as exc:
        raise SchemaViolation("$", "duplicate-field", f"key {exc.key!r} appears more than once") from None
    except ValueError as exc:
        raise SchemaViolation("$", "bad-type", str(exc)) from None


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise SchemaViolation(where, "missing-required-key", f"missing key {key!r}")
    return obj[key]


def _text(obj: dict, key: str, where: str, required: bool = True) -> str | None:
    if key not in obj and not required:
        return None
    value = _require(obj, key, where)
    if not isinstance(value, str):
        raise SchemaViolation(f"{where}.{key}", "bad-type", f"expected a string, got {type(value).__name__}")
    return value


def _only_keys(obj: dict, allowed, where: str) -> None:
    extra = sorted(set(obj) - set(allowed))
    if extra:
        raise SchemaViolation(where, "bad-type", f"unexpected key(s) {', '.join(extra)}")


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


# -- attribute values --------------------------------------------------------


def value_from_json(obj: Any, where: str = "$") -> AttributeValue:
    """Convert decoded JSON into an attribute value, validating typed leaves."""
    if isinstance(obj, bool):
        return Flag(obj)
    if isinstance(obj, (int, float)):
        if not math.isfinite(obj):
            raise SchemaViolation(where, "bad-type", "numbers must be finite")
        return Number(obj)
    if isinstance(obj, str):
        return Text(obj)
    if isinstance(obj, list):
        return ListValue(tuple(value_from_json(x, f"{where}[{i}]") for i, x in enumerate(obj)))
    if isinstance(obj, dict):
        tag = _typed_tag(obj)
        if tag:
            return _TYPED[tag](obj[tag], f"{where}.{tag}")
        return map_from_json(obj, where)
    raise SchemaViolation(where, "bad-type", f"unsupported value {obj!r}")


def _typed_tag(obj: dict) -> str | None:
    if len(obj) != 1:
        return None
    (tag, body), = obj.items()
    if tag == "histogram" and isinstance(body, dict) and ("bin_edges" in body or "counts" in body):
        return tag
    if tag == "quantity" and isinstance(body, dict) and "value" in body:
        return tag
    if (tag == "version" and isinstance(body, str)) or (tag == "schema" and isinstance(body, list)):
        return tag
    return None


def map_from_json(obj: dict, where: str) -> MapValue:
    entries = {}
    for key, value in obj.items():
        if not _KEY.match(key):
            raise SchemaViolation(f"{where}.{key}", "bad-type", "attribute keys must be identifiers")
        entries[key] = value_from_json(value, f"{where}.{key}")
    return MapValue(entries)


def _histogram(body, where: str) -> Histogram:
    if not isinstance(body, dict):
        raise SchemaViolation(where, "bad-histogram", "histogram must be an object")
    edges = _require(body, "bin_edges", where)
    counts = _require(body, "counts", where)
    _only_keys(body, ("bin_edges", "counts"), where)
    for key, seq in (("bin_edges", edges), ("counts", counts)):
        if not isinstance(seq, list) or not all(_is_number(x) for x in seq):
            raise SchemaViolation(f"{where}.{key}", "bad-histogram", "expected an array of finite numbers")
    problem = histogram_problem(edges, counts)
    if problem:
        raise SchemaViolation(where, "bad-histogram", problem)
    return Histogram(tuple(edges), tuple(counts))


def _version(body, where: str) -> Version:
    if not isinstance(body, str):
        raise SchemaViolation(where, "bad-version", "version must be a string like \"1.2.3\"")
    try:
        return Version.parse(body)
    except ValueError as exc:
        raise SchemaViolation(where, "bad-version", str(exc)) from None


def _schema(body, where: str) -> Schema:
    if not isinstance(body, list):
        raise SchemaViolation(where, "bad-type", "schema must be an array of fields")
    fields = []
    seen = set()
    for i, raw in enumerate(body):
        at = f"{where}[{i}]"
        if not isinstance(raw, dict):
            raise SchemaViolation(at, "bad-type", "schema field must be an object")
        _only_keys(raw, ("name", "dtype", "unit"), at)
        name = _text(raw, "name", at)
        dtype = _text(raw, "dtype", at)
        unit = raw.get("unit")
        if dtype not in DTYPES:
            raise SchemaViolation(f"{at}.dtype", "bad-type", f"dtype must be one of {', '.join(DTYPES)}")
        if unit is not None and not isinstance(unit, str):
            raise SchemaViolation(f"{at}.unit", "bad-type", "unit must be a string or null")
        if name in seen:
            raise SchemaViolation(at, "duplicate-field", f"field {name!r} declared twice")
        seen.add(name)
        fields.append(Field(name, dtype, unit))
    return Schema(tuple(fields))


def _quantity(body, where: str) -> Number:
    if not isinstance(body, dict):
        raise SchemaViolation(where, "bad-type", "quantity must be an object")
    value = _require(body, "value", where)
    unit = _text(body, "unit", where)
    _only_keys(body, ("value", "unit"), where)
    if not _is_number(value):
        raise SchemaViolation(f"{where}.value", "bad-type", "quantity value must be a finite number")
    return Number(value, unit)


_TYPED = {"histogram": _histogram, "version": _version, "schema": _schema, "quantity": _quantity}


def value_to_json(value: AttributeValue) -> Any:
    if isinstance(value, Flag):
        return value.value
    if isinstance(value, Number):
        if value.unit is None:
            return value.value
        return {"quantity": {"value": value.value, "unit": value.unit}}
    if isinstance(value, Text):
        return value.value
    if isinstance(value, Version):
        return {"version": str(value)}
    if isinstance(value, Histogram):
        return {"histogram": {"bin_edges": list(value.bin_edges), "counts": list(value.counts)}}
    if isinstance(value, Schema):
        return {
            "schema": [
                {"name": f.name, "dtype": f.dtype, **({"unit": f.unit} if f.unit is not None else {})}
                for f in value.fields
            ]
        }
    if isinstance(value, ListValue):
        return [value_to_json(x) for x in value.items]
    if isinstance(value, MapValue):
        out = {k: value_to_json(v) for k, v in value.items()}
        if _typed_tag(out):
            raise ValueError(f"map {out!r} would read back as a typed leaf")
        return out
    raise TypeError(f"not an attribute value: {value!r}")


# -- descriptors -------------------------------------------------------------

_DESCRIPTOR_KEYS = ("apiVersion", "kind", "name", "provenance", "attributes")


def _check_api_version(doc: dict) -> None:
    if "apiVersion" in doc and doc["apiVersion"] != API_VERSION:
        raise SchemaViolation("$.apiVersion", "bad-type", f"unsupported apiVersion {doc['apiVersion']!r}")


def descriptor_from_json(doc: Any) -> Descriptor:
    if not isinstance(doc, dict):
        raise SchemaViolation("$", "bad-type", "descriptor document must be a JSON object")
    _check_api_version(doc)
    kind_text = _text(doc, "kind", "$")
    try:
        kind = DescriptorKind.parse(kind_text)
    except ValueError:
        kinds = ", ".join(k.value for k in DescriptorKind)
        raise SchemaViolation("$.kind", "unknown-kind", f"{kind_text!r} is not one of {kinds}") from None
    name = _text(doc, "name", "$")
    provenance = _text(doc, "provenance", "$", required=False)
    attributes = _require(doc, "attributes", "$")
    _only_keys(doc, _DESCRIPTOR_KEYS, "$")
    if not isinstance(attributes, dict):
        raise SchemaViolation("$.attributes", "bad-type", "attributes must be an object")
    for key in METADATA_KEYS:
        if key in attributes:
            raise SchemaViolation(
                f"$.attributes.{key}", "duplicate-field", f"{key!r} is descriptor metadata, not an attribute"
            )
    return Descriptor(kind, name, map_from_json(attributes, "$.attributes"), provenance)


def parse_descriptor(document: str) -> Descriptor:
    return descriptor_from_json(load_json(document))


def descriptor_to_json(d: Descriptor) -> dict:
    doc = {"apiVersion": API_VERSION, "kind": d.kind.value, "name": d.name}
    if d.provenance is not None:
        doc["provenance"] = d.provenance
    doc["attributes"] = {k: value_to_json(v) for k, v in d.attributes.items()}
    return doc


def serialize_descriptor(d: Descriptor) -> str:
    return json.dumps(descriptor_to_json(d), indent=2, ensure_ascii=False) + "\n"


def load_descriptor_dir(directory: str | Path) -> DescriptorSet:
    """Parse every ``*.json`` file in ``directory`` into one descriptor set."""
    directory = Path(directory)
    if not directory.is_dir():
        raise NotADirectoryError(f"descriptor directory not found: {directory}")
    descriptors = []
    for path in sorted(directory.glob("*.json")):
        descriptors.append(parse_descriptor(path.read_text("utf-8")))
    return make_descriptor_set(descriptors)


# -- registries --------------------------------------------------------------

_REGISTRY_KEYS = ("apiVersion", "kind", "name", "mismatches")
_DEFINITION_KEYS = ("id", "description", "consequence", "predicate", "phase", "metadata")
_METADATA_KEYS = ("data_source", "feasibility", "validation_method", "automatable")


def _definition(raw: Any, where: str) -> MismatchDefinition:
    if not isinstance(raw, dict):
        raise SchemaViolation(where, "bad-type", "mismatch definition must be an object")
    mismatch_id = _text(raw, "id", where)
    if not mismatch_id:
        raise SchemaViolation(f"{where}.id", "bad-type", "id must be non-empty")
    description = _text(raw, "description", where)
    consequence = _text(raw, "consequence", where)
    source = _text(raw, "predicate", where)
    phase = _text(raw, "phase", where)
    _only_keys(raw, _DEFINITION_KEYS, where)
    if phase not in PHASES:
        raise SchemaViolation(f"{where}.phase", "bad-type", f"phase must be design or runtime, got {phase!r}")
    metadata = Metadata()
    if "metadata" in raw:
        meta = raw["metadata"]
        at = f"{where}.metadata"
        if not isinstance(meta, dict):
            raise SchemaViolation(at, "bad-type", "metadata must be an object")
        _only_keys(meta, _METADATA_KEYS, at)
        automatable = _require(meta, "automatable", at)
        if not isinstance(automatable, bool):
            raise SchemaViolation(f"{at}.automatable", "bad-type", "automatable must be true or false")
        metadata = Metadata(
            _text(meta, "data_source", at),
            _text(meta, "feasibility", at),
            _text(meta, "validation_method", at),
            automatable,
        )
    try:
        predicate = parse_predicate(source)
    except (SyntaxErr, PredicateError) as exc:
        raise RegistryError(mismatch_id, exc) from None
    definition = MismatchDefinition(mismatch_id, description, consequence, predicate, source, phase, metadata)
    if phase == "design":
        window_paths = sorted(str(p) for p in definition.paths if p.root == WINDOW_ROOT)
        if window_paths:
            raise SchemaViolation(
                f"{where}.predicate", "bad-type", f"design-phase predicate references runtime path {window_paths[0]}"
            )
    return definition


def registry_from_json(doc: Any) -> MismatchRegistry:
    if not isinstance(doc, dict):
        raise SchemaViolation("$", "bad-type", "registry document must be a JSON object")
    _check_api_version(doc)
    kind = _text(doc, "kind", "$")
    if kind != "MismatchRegistry":
        raise SchemaViolation("$.kind", "unknown-kind", f"expected MismatchRegistry, got {kind!r}")
    name = _text(doc, "name", "$")
    raw = _require(doc, "mismatches", "$")
    _only_keys(doc, _REGISTRY_KEYS, "$")
    if not isinstance(raw, list):
        raise SchemaViolation("$.mismatches", "bad-type", "mismatches must be an array")
    definitions = []
    seen = set()
    for i, item in enumerate(raw):
        d = _definition(item, f"$.mismatches[{i}]")
        if d.id in seen:
            raise SchemaViolation(f"$.mismatches[{i}].id", "duplicate-field", f"mismatch id {d.id!r} is not unique")
        seen.add(d.id)
        definitions.append(d)
    return MismatchRegistry(name, tuple(definitions))


def parse_registry(document: str) -> MismatchRegistry:
    return registry_from_json(load_json(document))


def registry_to_json(registry: MismatchRegistry) -> dict:
    return {
        "apiVersion": API_VERSION,
        "kind": "MismatchRegistry",
        "name": registry.name,
        "mismatches": [
            {
                "id": d.id,
                "description": d.description,
                "consequence": d.consequence,
                "predicate": d.source,
                "phase": d.phase,
                "metadata": {
                    "data_source": d.metadata.data_source,
                    "feasibility": d.metadata.feasibility,
                    "validation_method": d.metadata.validation_method,
                    "automatable": d.metadata.automatable,
                },
            }
            for d in registry.definitions
        ],
    }


def serialize_registry(registry: MismatchRegistry) -> str:
    return json.dumps(registry_to_json(registry), indent=2, ensure_ascii=False) + "\n"


def parse_document(document: str) -> Descriptor | MismatchRegistry:
    """Parse either document type, dispatching on its ``kind``."""
    doc = load_json(document)
    if isinstance(doc, dict) and doc.get("kind") == "MismatchRegistry":
        return registry_from_json(doc)
    return descriptor_from_json(doc)


# -- scaffolding -------------------------------------------------------------

_PLACEHOLDERS = {
    "histogram": Histogram((0.0, 1.0), (0,)),
    "schema": Schema(()),
    "list": ListValue(()),
    "version": Version((0,)),
    "number": Number(0),
    "flag": Flag(False),
    "text": Text(""),
}

_ARG_SHAPES = {
    "psi": "histogram",
    "ks": "histogram",
    "schema_compatible": "schema",
    "subset": "list",
    "version_lt": "version",
    "version_eq": "version",
    "abs": "number",
    "min": "number",
    "max": "number",
}


def infer_shapes(node: Node, shapes: dict[AttributePath, str] | None = None, want: str = "text") -> dict:
    """Guess the value shape each path needs from where it appears in ``node``."""
    if shapes is None:
        shapes = {}
    if isinstance(node, PathRef):
        shapes.setdefault(node.path, want)
    elif isinstance(node, Not):
        infer_shapes(node.operand, shapes, "flag")
    elif isinstance(node, Neg):
        infer_shapes(node.operand, shapes, "number")
    elif isinstance(node, BinOp):
        side = "flag" if node.op in ("and", "or") else "text" if node.op in ("==", "!=") else "number"
        infer_shapes(node.left, shapes, side)
        infer_shapes(node.right, shapes, side)
    elif isinstance(node, Call):
        for arg in node.args:
            infer_shapes(arg, shapes, _ARG_SHAPES.get(node.name, "text"))
    return shapes


def scaffold(kind: DescriptorKind, registry: MismatchRegistry | None = None) -> str:
    """Template descriptor holding a typed placeholder for every attribute the registry reads."""
    if registry is None:
        from .registry import canonical_registry

        registry = canonical_registry()
    shapes: dict[AttributePath, str] = {}
    for definition in registry:
        infer_shapes(definition.predicate, shapes)
    attributes = MapValue()
    for path in sorted(shapes):
        if path.root != kind.alias or path.segments[0] in METADATA_KEYS:
            continue
        attributes = attributes.set_path(path.segments, _PLACEHOLDERS[shapes[path]])
    d = Descriptor(kind, f"example-{kind.alias.replace('_', '-')}", attributes, "TODO: who supplies these values")
    return serialize_descriptor(d)


def describe_error(exc: Exception) -> str:
    if isinstance(exc, SchemaViolation):
        return f"{exc.path}: {exc.rule}: {exc.detail}"
    return str(exc)


__all__ = [
    "API_VERSION",
    "describe_error",
    "load_descriptor_dir",
    "parse_descriptor",
    "parse_document",
    "parse_registry",
    "scaffold",
    "serialize_descriptor",
    "serialize_registry",
    "value_from_json",
    "value_to_json",
]
