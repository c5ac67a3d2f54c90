"""Design-time detection: batch checks, gap analysis and the coverage matrix."""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field

from . import __version__
from .errors import TypeTraversal
from .model import METADATA_KEYS, WINDOW_ROOT, AttributePath, DescriptorSet
from .predicate import EvalTrace, TriBool, evaluate, pretty_print
from .registry import MismatchDefinition, MismatchRegistry


class Status(enum.Enum):
    FIRED = "fired"
    CLEAR = "clear"
    UNDETERMINED = "undetermined"

    @classmethod
    def of(cls, result: TriBool) -> "Status":
        return {TriBool.TRUE: cls.FIRED, TriBool.FALSE: cls.CLEAR, TriBool.UNKNOWN: cls.UNDETERMINED}[result]


@dataclass(frozen=True)
class Finding:
    mismatch_id: str
    status: Status
    trace: EvalTrace
    consequence: str = ""
    description: str = ""

    def __post_init__(self) -> None:
        if Status.of(self.trace.result) is not self.status:
            raise ValueError(f"status {self.status.value} contradicts trace result {self.trace.result.value}")


@dataclass(frozen=True)
class GapReport:
    mismatches_without_attributes: tuple[tuple[str, tuple[AttributePath, ...]], ...] = ()
    attributes_without_mismatch: tuple[AttributePath, ...] = ()

    @property
    def empty(self) -> bool:
        return not self.mismatches_without_attributes and not self.attributes_without_mismatch


@dataclass(frozen=True)
class Summary:
    fired: int = 0
    clear: int = 0
    undetermined: int = 0

    @classmethod
    def count(cls, statuses) -> "Summary":
        counts = {s: 0 for s in Status}
        for s in statuses:
            counts[s] += 1
        return cls(counts[Status.FIRED], counts[Status.CLEAR], counts[Status.UNDETERMINED])

    @classmethod
    def tally(cls, findings) -> "Summary":
        return cls.count(f.status for f in findings)


@dataclass(frozen=True)
class Report:
    tool_version: str
    descriptor_names: tuple[str, ...]
    registry_name: str
    findings: tuple[Finding, ...]
    gap: GapReport | None = None
    generated_at: str | None = None
    summary: Summary = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "descriptor_names", tuple(self.descriptor_names))
        object.__setattr__(self, "findings", tuple(self.findings))
        object.__setattr__(self, "summary", Summary.tally(self.findings))


def check_definition(definition: MismatchDefinition, dset: DescriptorSet) -> Finding:
    """Evaluate one definition; traversal errors become an Undetermined finding."""
    try:
        trace = evaluate(definition.predicate, dset)
    except TypeTraversal as exc:
        trace = EvalTrace(TriBool.UNKNOWN, notes=(str(exc),))
    return Finding(definition.id, Status.of(trace.result), trace, definition.consequence, definition.description)


def run_checks(
    dset: DescriptorSet,
    registry: MismatchRegistry,
    *,
    gap: bool = False,
    generated_at: str | None = None,
) -> Report:
    findings = tuple(check_definition(d, dset) for d in registry.phase("design"))
    return Report(
        tool_version=__version__,
        descriptor_names=tuple(d.name for d in dset.descriptors.values()),
        registry_name=registry.name,
        findings=findings,
        gap=gap_analysis(dset, registry) if gap else None,
        generated_at=generated_at,
    )


def declared_paths(dset: DescriptorSet) -> set[AttributePath]:
    """Leaf attribute paths declared by the set's descriptors."""
    return dset.leaf_paths()


def _metadata_paths(dset: DescriptorSet) -> set[AttributePath]:
    found = set()
    for d in dset.descriptors.values():
        for key in METADATA_KEYS:
            if getattr(d, key) is not None:
                found.add(AttributePath(d.kind.alias, (key,)))
    return found


def gap_analysis(dset: DescriptorSet, registry: MismatchRegistry) -> GapReport:
    """Find predicates reading undeclared attributes, and declared attributes nothing reads.

    Paths under the runtime ``window`` root are supplied by the monitor and are
    never gaps; ``<root>.name``/``<root>.provenance`` count as declared whenever
    the descriptor carries them.
    """
    declared = declared_paths(dset)
    available = declared | _metadata_paths(dset)
    gapped = []
    for d in registry.definitions:
        unmatched = sorted(p for p in d.paths if p.root != WINDOW_ROOT and p not in available)
        if unmatched:
            gapped.append((d.id, tuple(unmatched)))
    referenced = registry.paths()
    unused = sorted(p for p in declared if p not in referenced)
    return GapReport(tuple(gapped), tuple(unused))


@dataclass(frozen=True)
class CoverageMatrix:
    rows: tuple[str, ...]
    columns: tuple[AttributePath, ...]
    cells: tuple[tuple[int, ...], ...]
    formalizations: tuple[str, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.columns)

    def cell(self, mismatch_id: str, path: AttributePath) -> int:
        return self.cells[self.rows.index(mismatch_id)][self.columns.index(path)]

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["mismatch_id", "formalization", *map(str, self.columns)])
        for row_id, formalization, cells in zip(self.rows, self.formalizations, self.cells):
            writer.writerow([row_id, formalization, *map(str, cells)])
        return out.getvalue()


def coverage_matrix(registry: MismatchRegistry) -> CoverageMatrix:
    definitions = sorted(registry.definitions, key=lambda d: d.id)
    columns = tuple(sorted(registry.paths()))
    cells = tuple(tuple(int(p in d.paths) for p in columns) for d in definitions)
    return CoverageMatrix(
        rows=tuple(d.id for d in definitions),
        columns=columns,
        cells=cells,
        formalizations=tuple(pretty_print(d.predicate) for d in definitions),
    )
