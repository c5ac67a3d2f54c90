"""In-memory model of system-element descriptors.

A descriptor records the attributes of one element of an ML-enabled system
(the trained model, its training data, the operational data, and the two
environments). Attribute trees are immutable; predicates address their leaves
with dotted :class:`AttributePath` values such as
``production_environment.resources.memory_mb``.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union

from .errors import DuplicateDescriptor, TypeTraversal


class DescriptorKind(enum.Enum):
    TRAINED_MODEL = "TrainedModel"
    TRAINING_DATA = "TrainingData"
    OPERATIONAL_DATA = "OperationalData"
    DEVELOPMENT_ENVIRONMENT = "DevelopmentEnvironment"
    PRODUCTION_ENVIRONMENT = "ProductionEnvironment"

    @property
    def alias(self) -> str:
        """snake_case name used as the root of attribute paths."""
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "DescriptorKind":
        for kind in cls:
            if kind.value == text:
                return kind
        raise ValueError(f"unknown descriptor kind {text!r}")

    @classmethod
    def from_alias(cls, alias: str) -> "DescriptorKind | None":
        return _ALIASES.get(alias)


_ALIASES = {kind.alias: kind for kind in DescriptorKind}
_KIND_ORDER = {kind: i for i, kind in enumerate(DescriptorKind)}

#: Root under which the drift monitor exposes live window statistics.
WINDOW_ROOT = "window"

#: Top-level descriptor fields addressable as ``<root>.name`` / ``<root>.provenance``.
METADATA_KEYS = ("name", "provenance")


# -- attribute values --------------------------------------------------------


@dataclass(frozen=True)
class Number:
    value: float
    unit: str | None = None

    def __post_init__(self) -> None:
        if isinstance(self.value, bool) or not isinstance(self.value, (int, float)):
            raise TypeError(f"Number needs an int or float, got {self.value!r}")


@dataclass(frozen=True)
class Text:
    value: str


@dataclass(frozen=True)
class Flag:
    value: bool


@dataclass(frozen=True)
class Version:
    components: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise ValueError("version needs at least one component")
        if any(isinstance(c, bool) or not isinstance(c, int) or c < 0 for c in self.components):
            raise ValueError(f"version components must be non-negative integers: {self.components}")

    @classmethod
    def parse(cls, text: str) -> "Version":
        if not re.fullmatch(r"[0-9]+(\.[0-9]+)*", text):
            raise ValueError(f"malformed version {text!r}")
        return cls(tuple(int(part) for part in text.split(".")))

    def __str__(self) -> str:
        return ".".join(map(str, self.components))


@dataclass(frozen=True)
class Histogram:
    bin_edges: tuple[float, ...]
    counts: tuple[float, ...]

    def __post_init__(self) -> None:
        problem = histogram_problem(self.bin_edges, self.counts)
        if problem:
            raise ValueError(problem)

    @property
    def total(self) -> float:
        return sum(self.counts)


def histogram_problem(bin_edges, counts) -> str | None:
    """Describe why (edges, counts) is not a valid histogram, or return None."""
    if len(bin_edges) < 2:
        return "histogram needs at least two bin edges"
    if any(b <= a for a, b in zip(bin_edges, bin_edges[1:])):
        return "bin_edges must be strictly ascending"
    if len(counts) != len(bin_edges) - 1:
        return f"expected {len(bin_edges) - 1} counts for {len(bin_edges)} edges, got {len(counts)}"
    if any(c < 0 for c in counts):
        return "counts must be non-negative"
    return None


DTYPES = ("int", "float", "string", "bool")


@dataclass(frozen=True)
class Field:
    name: str
    dtype: str
    unit: str | None = None

    def __post_init__(self) -> None:
        if self.dtype not in DTYPES:
            raise ValueError(f"unknown dtype {self.dtype!r}")


@dataclass(frozen=True)
class Schema:
    fields: tuple[Field, ...]

    def __post_init__(self) -> None:
        names = [f.name for f in self.fields]
        if len(names) != len(set(names)):
            raise ValueError("schema field names must be unique")

    def get(self, name: str) -> Field | None:
        for f in self.fields:
            if f.name == name:
                return f
        return None


@dataclass(frozen=True)
class ListValue:
    items: tuple["AttributeValue", ...] = ()

    def __iter__(self):
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class MapValue:
    entries: Mapping[str, "AttributeValue"] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", dict(self.entries))

    def __getitem__(self, key: str) -> "AttributeValue":
        return self.entries[key]

    def __contains__(self, key: object) -> bool:
        return key in self.entries

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, key: str):
        return self.entries.get(key)

    def items(self):
        return self.entries.items()

    def set_path(self, segments: Iterable[str], value: "AttributeValue") -> "MapValue":
        """Return a copy with ``value`` stored at ``segments``, creating maps on the way."""
        segments = tuple(segments)
        head, rest = segments[0], segments[1:]
        entries = dict(self.entries)
        if rest:
            child = entries.get(head, MapValue())
            if not isinstance(child, MapValue):
                raise TypeTraversal(head)
            entries[head] = child.set_path(rest, value)
        else:
            entries[head] = value
        return MapValue(entries)


AttributeValue = Union[Number, Text, Flag, Version, ListValue, MapValue, Histogram, Schema]
LEAF_TYPES = (Number, Text, Flag, Version, Histogram, Schema)


# -- paths -------------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class AttributePath:
    root: str
    segments: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments:
            raise ValueError("attribute path needs at least one segment after the root")
        for part in (self.root, *self.segments):
            if not _IDENT.match(part):
                raise ValueError(f"invalid path segment {part!r}")

    @classmethod
    def parse(cls, text: str) -> "AttributePath":
        root, *segments = text.split(".")
        return cls(root, tuple(segments))

    def __str__(self) -> str:
        return ".".join((self.root, *self.segments))

    def __lt__(self, other: "AttributePath") -> bool:
        return str(self) < str(other)


# -- descriptors -------------------------------------------------------------


@dataclass(frozen=True)
class Descriptor:
    kind: DescriptorKind
    name: str
    attributes: MapValue = field(default_factory=MapValue)
    provenance: str | None = None

    def __post_init__(self) -> None:
        for key in METADATA_KEYS:
            if key in self.attributes:
                raise ValueError(f"attribute key {key!r} collides with descriptor metadata")

    def leaf_paths(self) -> Iterator[tuple[AttributePath, AttributeValue]]:
        """Yield every (path, value) pair whose value is not a map."""
        root = self.kind.alias

        def walk(node: MapValue, prefix: tuple[str, ...]):
            for key, value in node.items():
                if isinstance(value, MapValue):
                    yield from walk(value, prefix + (key,))
                else:
                    yield AttributePath(root, prefix + (key,)), value

        yield from walk(self.attributes, ())


@dataclass(frozen=True)
class DescriptorSet:
    descriptors: Mapping[DescriptorKind, Descriptor] = field(default_factory=dict)
    window: MapValue | None = None

    def __post_init__(self) -> None:
        ordered = sorted(self.descriptors.items(), key=lambda kv: _KIND_ORDER[kv[0]])
        object.__setattr__(self, "descriptors", dict(ordered))

    def __len__(self) -> int:
        return len(self.descriptors)

    def __contains__(self, kind: object) -> bool:
        return kind in self.descriptors

    def get(self, kind: DescriptorKind) -> Descriptor | None:
        return self.descriptors.get(kind)

    def with_window(self, window: MapValue) -> "DescriptorSet":
        return DescriptorSet(self.descriptors, window)

    def leaf_paths(self) -> set[AttributePath]:
        return {path for d in self.descriptors.values() for path, _ in d.leaf_paths()}


def make_descriptor_set(descriptors: Iterable[Descriptor]) -> DescriptorSet:
    by_kind: dict[DescriptorKind, Descriptor] = {}
    for d in descriptors:
        if d.kind in by_kind:
            raise DuplicateDescriptor(d.kind)
        by_kind[d.kind] = d
    return DescriptorSet(by_kind)


def attribute_lookup(dset: DescriptorSet, path: AttributePath) -> AttributeValue | None:
    """Resolve ``path`` against ``dset``; None means the attribute is absent.

    Raises TypeTraversal if the path tries to descend through a non-map value.
    """
    if path.root == WINDOW_ROOT:
        node: AttributeValue | None = dset.window
    else:
        kind = DescriptorKind.from_alias(path.root)
        descriptor = dset.get(kind) if kind else None
        if descriptor is None:
            return None
        head = path.segments[0]
        if head in METADATA_KEYS:
            if len(path.segments) > 1:
                raise TypeTraversal(head, str(path))
            meta = getattr(descriptor, head)
            return None if meta is None else Text(meta)
        node = descriptor.attributes
    if node is None:
        return None
    previous = path.root
    for segment in path.segments:
        if not isinstance(node, MapValue):
            raise TypeTraversal(previous, str(path))
        node = node.get(segment)
        if node is None:
            return None
        previous = segment
    return node
