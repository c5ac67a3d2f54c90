"""Report rendering (JSON and text), JSON parsing, and CI exit codes.

Exit codes: 0 all checks clear, 2 a mismatch fired, 3 nothing fired but some
check was undetermined, 1 usage or internal error.
"""
from __future__ import annotations

import json
from typing import Any

from .engine import Finding, GapReport, Report, Status, Summary
from .model import (
    AttributePath,
    AttributeValue,
    Field,
    Flag,
    Histogram,
    ListValue,
    MapValue,
    Number,
    Schema,
    Text,
    Version,
)
from .predicate import EvalTrace, TriBool

EXIT_CLEAR = 0
EXIT_ERROR = 1
EXIT_FIRED = 2
EXIT_UNDETERMINED = 3


# Bindings may hold any attribute value, including maps whose only key looks
# like a descriptor-document tag, so reports use an always-tagged encoding.
def encode_value(v: AttributeValue) -> dict:
    if isinstance(v, Number):
        body: dict[str, Any] = {"value": v.value}
        if v.unit is not None:
            body["unit"] = v.unit
        return {"number": body}
    if isinstance(v, Text):
        return {"text": v.value}
    if isinstance(v, Flag):
        return {"flag": v.value}
    if isinstance(v, Version):
        return {"version": str(v)}
    if isinstance(v, Histogram):
        return {"histogram": {"bin_edges": list(v.bin_edges), "counts": list(v.counts)}}
    if isinstance(v, Schema):
        return {"schema": [{"name": f.name, "dtype": f.dtype, "unit": f.unit} for f in v.fields]}
    if isinstance(v, ListValue):
        return {"list": [encode_value(x) for x in v.items]}
    if isinstance(v, MapValue):
        return {"map": {k: encode_value(x) for k, x in v.items()}}
    raise TypeError(f"not an attribute value: {v!r}")


def decode_value(obj: dict) -> AttributeValue:
    (tag, body), = obj.items()
    if tag == "number":
        return Number(body["value"], body.get("unit"))
    if tag == "text":
        return Text(body)
    if tag == "flag":
        return Flag(body)
    if tag == "version":
        return Version.parse(body)
    if tag == "histogram":
        return Histogram(tuple(body["bin_edges"]), tuple(body["counts"]))
    if tag == "schema":
        return Schema(tuple(Field(f["name"], f["dtype"], f.get("unit")) for f in body))
    if tag == "list":
        return ListValue(tuple(decode_value(x) for x in body))
    if tag == "map":
        return MapValue({k: decode_value(x) for k, x in body.items()})
    raise ValueError(f"unknown value tag {tag!r}")


def trace_to_json(t: EvalTrace) -> dict:
    return {
        "result": t.result.value,
        "missing_paths": sorted(map(str, t.missing_paths)),
        "bindings": {str(p): encode_value(v) for p, v in sorted(t.bindings.items())},
        "notes": list(t.notes),
    }


def trace_from_json(obj: dict) -> EvalTrace:
    return EvalTrace(
        TriBool(obj["result"]),
        frozenset(AttributePath.parse(p) for p in obj["missing_paths"]),
        {AttributePath.parse(p): decode_value(v) for p, v in obj["bindings"].items()},
        tuple(obj["notes"]),
    )


def finding_to_json(f: Finding) -> dict:
    return {
        "mismatch_id": f.mismatch_id,
        "status": f.status.value,
        "description": f.description,
        "consequence": f.consequence,
        "trace": trace_to_json(f.trace),
    }


def finding_from_json(obj: dict) -> Finding:
    return Finding(
        obj["mismatch_id"],
        Status(obj["status"]),
        trace_from_json(obj["trace"]),
        obj.get("consequence", ""),
        obj.get("description", ""),
    )


def gap_to_json(g: GapReport) -> dict:
    return {
        "mismatches_without_attributes": [
            {"mismatch_id": mid, "paths": [str(p) for p in paths]} for mid, paths in g.mismatches_without_attributes
        ],
        "attributes_without_mismatch": [str(p) for p in g.attributes_without_mismatch],
    }


def gap_from_json(obj: dict) -> GapReport:
    return GapReport(
        tuple(
            (item["mismatch_id"], tuple(AttributePath.parse(p) for p in item["paths"]))
            for item in obj["mismatches_without_attributes"]
        ),
        tuple(AttributePath.parse(p) for p in obj["attributes_without_mismatch"]),
    )


def report_to_json(r: Report) -> dict:
    doc: dict[str, Any] = {
        "tool_version": r.tool_version,
        "registry_name": r.registry_name,
        "descriptor_names": list(r.descriptor_names),
        "summary": {"fired": r.summary.fired, "clear": r.summary.clear, "undetermined": r.summary.undetermined},
        "findings": [finding_to_json(f) for f in r.findings],
    }
    if r.gap is not None:
        doc["gap"] = gap_to_json(r.gap)
    if r.generated_at is not None:
        doc["generated_at"] = r.generated_at
    return doc


def report_from_json(doc: dict) -> Report:
    report = Report(
        tool_version=doc["tool_version"],
        descriptor_names=tuple(doc["descriptor_names"]),
        registry_name=doc["registry_name"],
        findings=tuple(finding_from_json(f) for f in doc["findings"]),
        gap=gap_from_json(doc["gap"]) if "gap" in doc else None,
        generated_at=doc.get("generated_at"),
    )
    if "summary" in doc and Summary(**doc["summary"]) != report.summary:
        raise ValueError("report summary does not match its findings")
    return report


def parse_report(text: str) -> Report:
    return report_from_json(json.loads(text))


def summary_line(s: Summary) -> str:
    return f"{s.fired} fired, {s.clear} clear, {s.undetermined} undetermined"


def render_gap(g: GapReport) -> list[str]:
    lines = []
    if g.empty:
        return ["gap analysis: no gaps"]
    for mid, paths in g.mismatches_without_attributes:
        lines.append(f"gap: {mid} reads undeclared {', '.join(map(str, paths))}")
    for p in g.attributes_without_mismatch:
        lines.append(f"gap: {p} is not used by any mismatch")
    return lines


def render_text(r: Report) -> str:
    lines = []
    for f in r.findings:
        if f.status is Status.FIRED:
            lines.append(f"FIRED {f.mismatch_id}: {f.description}".rstrip())
            lines.append(f"    consequence: {f.consequence}")
        elif f.status is Status.UNDETERMINED:
            lines.append(f"UNDETERMINED {f.mismatch_id}")
            if f.trace.missing_paths:
                lines.append(f"    missing: {', '.join(sorted(map(str, f.trace.missing_paths)))}")
            for note in f.trace.notes:
                lines.append(f"    note: {note}")
    if r.gap is not None:
        lines.extend(render_gap(r.gap))
    lines.append(summary_line(r.summary))
    return "\n".join(lines) + "\n"


def render_report(r: Report, format: str = "json") -> str:
    if format == "json":
        return json.dumps(report_to_json(r), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if format == "text":
        return render_text(r)
    raise ValueError(f"unknown report format {format!r}")


def exit_code_for(summary: Summary) -> int:
    if summary.fired:
        return EXIT_FIRED
    if summary.undetermined:
        return EXIT_UNDETERMINED
    return EXIT_CLEAR


def exit_code(r: Report) -> int:
    return exit_code_for(r.summary)
