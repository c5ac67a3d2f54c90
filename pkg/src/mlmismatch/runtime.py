"""Runtime mismatch detection over a replayed stream of operational records.

Records enter a count-based FIFO window. Each feature that has a training
histogram is binned on the same edges, incrementally, as records arrive and
leave; rolling accuracy is tracked the same way. Every ``tick`` records the
window is exposed under the reserved ``window`` root and the registry's
runtime-phase predicates are evaluated against it.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Mapping

from . import kernels, stats
from .engine import Finding, check_definition
from .errors import OutOfOrder, SyntaxErr
from .model import (
    DescriptorKind,
    DescriptorSet,
    Histogram,
    MapValue,
    Number,
)
from .predicate import EvalTrace
from .registry import MismatchRegistry

DEFAULT_CAPACITY = 1000


@dataclass(frozen=True)
class OperationalRecord:
    sequence: int
    features: Mapping[str, float] = field(default_factory=dict)
    prediction: Any = None
    ground_truth: Any = None

    @property
    def labeled(self) -> bool:
        return self.prediction is not None and self.ground_truth is not None

    @property
    def correct(self) -> bool:
        return self.labeled and _same(self.prediction, self.ground_truth)


def _same(a, b) -> bool:
    # JSON true must not equal 1
    return isinstance(a, bool) == isinstance(b, bool) and a == b


def record_from_json(obj: Any, line: int = 1) -> OperationalRecord:
    if not isinstance(obj, dict):
        raise SyntaxErr("record must be a JSON object", line)
    seq = obj.get("seq")
    if isinstance(seq, bool) or not isinstance(seq, int):
        raise SyntaxErr("record needs an integer 'seq'", line)
    features = obj.get("features", {})
    if not isinstance(features, dict):
        raise SyntaxErr("'features' must be an object", line)
    for name, value in features.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            raise SyntaxErr(f"feature {name!r} must be a finite number", line)
    return OperationalRecord(seq, dict(features), obj.get("prediction"), obj.get("ground_truth"))


def read_records(lines: Iterable[str]) -> Iterator[OperationalRecord]:
    """Parse JSON Lines; blank lines are skipped."""
    for number, text in enumerate(lines, start=1):
        if not text.strip():
            continue
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SyntaxErr(exc.msg, number, exc.colno) from None
        yield record_from_json(obj, number)


def record_to_json(r: OperationalRecord) -> dict:
    obj: dict[str, Any] = {"seq": r.sequence, "features": dict(r.features)}
    if r.prediction is not None:
        obj["prediction"] = r.prediction
    if r.ground_truth is not None:
        obj["ground_truth"] = r.ground_truth
    return obj


class Window:
    """Bounded FIFO of records with per-feature histograms kept in step."""

    def __init__(self, capacity: int = DEFAULT_CAPACITY, bin_edges: Mapping[str, Iterable[float]] | None = None):
        if capacity < 1:
            raise ValueError("window capacity must be positive")
        self.capacity = capacity
        self.records: deque[OperationalRecord] = deque()
        self._edges = {}
        for name, edges in (bin_edges or {}).items():
            edges = tuple(float(e) for e in edges)
            stats.check_edges(edges)
            self._edges[name] = (edges, kernels.as_buffer(edges))
        self._counts = {name: [0] * (len(e) - 1) for name, (e, _) in self._edges.items()}
        self._clamped = dict.fromkeys(self._edges, 0)
        self._bins: deque[tuple[tuple[str, int, bool], ...]] = deque()
        self._labeled = 0
        self._correct = 0
        self.last_sequence: int | None = None

    def __len__(self) -> int:
        return len(self.records)

    @property
    def features(self) -> tuple[str, ...]:
        return tuple(self._edges)

    def update(self, record: OperationalRecord) -> "Window":
        if self.last_sequence is not None and record.sequence <= self.last_sequence:
            raise OutOfOrder(record.sequence, self.last_sequence)
        if len(self.records) == self.capacity:
            self._evict()
        bin_index = kernels.backend.bin_index
        placed = []
        for name, (edges, buf) in self._edges.items():
            value = record.features.get(name)
            if value is None:
                continue
            i = bin_index(buf, value)
            clamped = value < edges[0] or value >= edges[-1]
            self._counts[name][i] += 1
            self._clamped[name] += clamped
            placed.append((name, i, clamped))
        self.records.append(record)
        self._bins.append(tuple(placed))
        self._labeled += record.labeled
        self._correct += record.correct
        self.last_sequence = record.sequence
        return self

    def _evict(self) -> None:
        old = self.records.popleft()
        for name, i, clamped in self._bins.popleft():
            self._counts[name][i] -= 1
            self._clamped[name] -= clamped
        self._labeled -= old.labeled
        self._correct -= old.correct

    def histogram(self, name: str) -> Histogram:
        return Histogram(self._edges[name][0], tuple(self._counts[name]))

    def histograms(self) -> dict[str, Histogram]:
        return {name: self.histogram(name) for name in self._edges}

    def clamped(self, name: str) -> int:
        return self._clamped[name]

    def rolling_accuracy(self) -> float | None:
        if not self._labeled:
            return None
        return self._correct / self._labeled

    def as_map(self) -> MapValue:
        """The window as the attribute tree exposed under the ``window`` root."""
        entries = {
            "size": Number(len(self.records)),
            "features": MapValue({name: MapValue({"histogram": h}) for name, h in self.histograms().items()}),
        }
        accuracy = self.rolling_accuracy()
        if accuracy is not None:
            entries["accuracy"] = Number(accuracy)
        return MapValue(entries)


def update_window(w: Window, r: OperationalRecord) -> Window:
    return w.update(r)


def rolling_accuracy(w: Window) -> float | None:
    """Fraction of labeled records in the window whose prediction matches the label."""
    return w.rolling_accuracy()


def training_bin_edges(dset: DescriptorSet) -> dict[str, tuple[float, ...]]:
    """Bin edges of every ``training_data.features.<name>.histogram`` in the set."""
    training = dset.get(DescriptorKind.TRAINING_DATA)
    if training is None:
        return {}
    features = training.attributes.get("features")
    if not isinstance(features, MapValue):
        return {}
    edges = {}
    for name, node in features.items():
        h = node.get("histogram") if isinstance(node, MapValue) else None
        if isinstance(h, Histogram):
            edges[name] = h.bin_edges
    return edges


def _clamping_notes(w: Window, trace: EvalTrace) -> tuple[str, ...]:
    notes = []
    for path in sorted(trace.bindings):
        s = path.segments
        if path.root == "window" and len(s) == 3 and s[0] == "features" and s[2] == "histogram":
            n = w.clamped(s[1])
            if n:
                notes.append(f"{path}: {n} of {len(w)} values clamped into edge bins")
    return tuple(notes)


def evaluate_runtime(w: Window, dset: DescriptorSet, registry: MismatchRegistry) -> list[Finding]:
    live = dset.with_window(w.as_map())
    findings = []
    for definition in registry.phase("runtime"):
        finding = check_definition(definition, live)
        extra = _clamping_notes(w, finding.trace)
        if extra:
            t = finding.trace
            trace = EvalTrace(t.result, t.missing_paths, t.bindings, t.notes + extra)
            finding = Finding(finding.mismatch_id, finding.status, trace, finding.consequence, finding.description)
        findings.append(finding)
    return findings


@dataclass(frozen=True)
class Tick:
    sequence: int
    records_seen: int
    window_size: int
    findings: tuple[Finding, ...]


def default_tick(capacity: int) -> int:
    return max(1, capacity // 10)


def replay(
    records: Iterable[OperationalRecord],
    dset: DescriptorSet,
    registry: MismatchRegistry,
    capacity: int = DEFAULT_CAPACITY,
    tick: int | None = None,
) -> Iterator[Tick]:
    """Feed ``records`` through a fresh window, yielding findings every ``tick`` records."""
    tick = tick or default_tick(capacity)
    if tick < 1:
        raise ValueError("tick must be positive")
    w = Window(capacity, training_bin_edges(dset))
    seen = 0
    for record in records:
        w.update(record)
        seen += 1
        if seen % tick == 0:
            yield Tick(record.sequence, seen, len(w), tuple(evaluate_runtime(w, dset, registry)))


__all__ = [
    "DEFAULT_CAPACITY",
    "OperationalRecord",
    "Tick",
    "Window",
    "evaluate_runtime",
    "read_records",
    "replay",
    "rolling_accuracy",
    "training_bin_edges",
    "update_window",
]
