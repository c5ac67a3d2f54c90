"""Command-line interface.

    mlmismatch validate FILE...
    mlmismatch check --descriptors DIR [--registry FILE] [--format json|text] [--gap]
    mlmismatch gap --descriptors DIR [--registry FILE]
    mlmismatch matrix [--registry FILE] [--out FILE.csv]
    mlmismatch monitor --descriptors DIR --registry FILE --input RECORDS.jsonl [--window N] [--tick K]
    mlmismatch init KIND [--out FILE]

Without ``--registry`` the shipped canonical registry is used.
"""
from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .documents import describe_error, load_descriptor_dir, parse_document, parse_registry, scaffold
from .engine import Status, Summary, coverage_matrix, gap_analysis, run_checks
from .errors import MismatchError
from .model import Descriptor, DescriptorKind
from .registry import MismatchRegistry, canonical_registry
from .report import (
    EXIT_CLEAR,
    EXIT_ERROR,
    exit_code,
    exit_code_for,
    finding_to_json,
    gap_to_json,
    render_gap,
    render_report,
)
from .runtime import DEFAULT_CAPACITY, default_tick, read_records, replay


def _registry(path: str | None) -> MismatchRegistry:
    if path is None:
        return canonical_registry()
    return parse_registry(Path(path).read_text("utf-8"))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, "utf-8")
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    ok = True
    for name in args.files:
        try:
            doc = parse_document(Path(name).read_text("utf-8"))
        except (MismatchError, OSError, UnicodeDecodeError) as exc:
            ok = False
            print(f"FAIL {name}: {describe_error(exc)}")
            continue
        if isinstance(doc, Descriptor):
            print(f"OK   {name}: {doc.kind.value} {doc.name!r}")
        else:
            print(f"OK   {name}: MismatchRegistry {doc.name!r} ({len(doc)} mismatches)")
    return EXIT_CLEAR if ok else EXIT_ERROR


def cmd_check(args) -> int:
    dset = load_descriptor_dir(args.descriptors)
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds") if args.timestamp else None
    report = run_checks(dset, _registry(args.registry), gap=args.gap, generated_at=stamp)
    _emit(render_report(report, args.format), args.out)
    return exit_code(report)


def cmd_gap(args) -> int:
    report = gap_analysis(load_descriptor_dir(args.descriptors), _registry(args.registry))
    if args.format == "json":
        _emit(json.dumps(gap_to_json(report), indent=2, sort_keys=True) + "\n", args.out)
    else:
        _emit("\n".join(render_gap(report)) + "\n", args.out)
    return EXIT_CLEAR


def cmd_matrix(args) -> int:
    _emit(coverage_matrix(_registry(args.registry)).to_csv(), args.out)
    return EXIT_CLEAR


def cmd_monitor(args) -> int:
    dset = load_descriptor_dir(args.descriptors)
    registry = _registry(args.registry)
    tick = args.tick or default_tick(args.window)
    sink = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    statuses = []
    first_fired: dict[str, int] = {}
    try:
        with open(args.input, encoding="utf-8") as lines:
            for t in replay(read_records(lines), dset, registry, args.window, tick):
                for f in t.findings:
                    statuses.append(f.status)
                    if f.status is Status.FIRED:
                        first_fired.setdefault(f.mismatch_id, t.sequence)
                    line = {"seq": t.sequence, "records_seen": t.records_seen, "window_size": t.window_size}
                    line.update(finding_to_json(f))
                    sink.write(json.dumps(line, sort_keys=True) + "\n")
    finally:
        if sink is not sys.stdout:
            sink.close()
    for mid, seq in sorted(first_fired.items()):
        print(f"monitor: {mid} first fired at seq {seq}", file=sys.stderr)
    return exit_code_for(Summary.count(statuses))


def cmd_init(args) -> int:
    text = args.kind.lower()
    kind = DescriptorKind.from_alias(text) or next((k for k in DescriptorKind if k.value.lower() == text), None)
    if kind is None:
        choices = ", ".join(k.value for k in DescriptorKind)
        print(f"error: unknown kind {args.kind!r}; choose one of {choices}", file=sys.stderr)
        return EXIT_ERROR
    _emit(scaffold(kind, _registry(args.registry) if args.registry else None), args.out)
    return EXIT_CLEAR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mlmismatch", description="Detect mismatches between ML system elements.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="schema-validate descriptor and registry documents")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_validate)

    def common(p, descriptors=True):
        if descriptors:
            p.add_argument("--descriptors", required=True, help="directory of descriptor *.json files")
        p.add_argument("--registry", help="mismatch registry (default: shipped canonical registry)")
        p.add_argument("--out", help="write output to this file instead of stdout")

    p = sub.add_parser("check", help="run design-time mismatch checks")
    common(p)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--gap", action="store_true", help="include gap analysis in the report")
    p.add_argument("--timestamp", action="store_true", help="record generation time in the report")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gap", help="report unmapped mismatches and attributes")
    common(p)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("matrix", help="export the mismatch x attribute coverage matrix as CSV")
    common(p, descriptors=False)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("monitor", help="replay operational records through runtime checks")
    common(p)
    p.add_argument("--input", required=True, help="JSON Lines file of operational records")
    p.add_argument("--window", type=int, default=DEFAULT_CAPACITY, help="window capacity in records")
    p.add_argument("--tick", type=int, help="evaluate every K records (default: window/10)")
    p.set_defaults(func=cmd_monitor)

    p = sub.add_parser("init", help="write a descriptor template for a kind")
    p.add_argument("kind", help="TrainedModel, TrainingData, ... or the snake_case alias")
    p.add_argument("--registry", help="registry whose attribute paths seed the template")
    p.add_argument("--out")
    p.set_defaults(func=cmd_init)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CLEAR if exc.code == 0 else EXIT_ERROR
    if getattr(args, "window", 1) < 1 or (getattr(args, "tick", None) or 1) < 1:
        print("error: --window and --tick must be positive", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (MismatchError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {describe_error(exc)}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
