"""Mismatch definitions and the registries that group them."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources

from .model import AttributePath
from .predicate import Node, collect_paths

PHASES = ("design", "runtime")


@dataclass(frozen=True)
class Metadata:
    data_source: str = ""
    feasibility: str = ""
    validation_method: str = ""
    automatable: bool = False


@dataclass(frozen=True)
class MismatchDefinition:
    id: str
    description: str
    consequence: str
    predicate: Node
    source: str
    phase: str = "design"
    metadata: Metadata = field(default_factory=Metadata)

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("mismatch id must be non-empty")
        if self.phase not in PHASES:
            raise ValueError(f"phase must be one of {PHASES}, got {self.phase!r}")

    @cached_property
    def paths(self) -> frozenset[AttributePath]:
        return collect_paths(self.predicate)


@dataclass(frozen=True)
class MismatchRegistry:
    name: str
    definitions: tuple[MismatchDefinition, ...] = ()

    def __post_init__(self) -> None:
        ids = [d.id for d in self.definitions]
        if len(ids) != len(set(ids)):
            raise ValueError("mismatch ids must be unique within a registry")
        object.__setattr__(self, "definitions", tuple(sorted(self.definitions, key=lambda d: d.id)))

    def __len__(self) -> int:
        return len(self.definitions)

    def __iter__(self):
        return iter(self.definitions)

    def get(self, mismatch_id: str) -> MismatchDefinition | None:
        for d in self.definitions:
            if d.id == mismatch_id:
                return d
        return None

    def phase(self, phase: str) -> tuple[MismatchDefinition, ...]:
        return tuple(d for d in self.definitions if d.phase == phase)

    def paths(self) -> frozenset[AttributePath]:
        return frozenset().union(*(d.paths for d in self.definitions))


def canonical_registry_text() -> str:
    return resources.files("mlmismatch").joinpath("data/canonical_registry.json").read_text("utf-8")


def canonical_registry() -> MismatchRegistry:
    """The shipped registry of the five reference mismatches (M1-M5)."""
    from .documents import parse_registry

    return parse_registry(canonical_registry_text())
