"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""
import itertools
import json
import random
import re
import shutil
import subprocess
import sys
import time
from contextlib import contextmanager

import pytest

from conftest import ACCEPTANCE_LINES, CORPUS
from gen import rand_descriptor_set, rand_histogram_pair, rand_predicate, rand_stream
from mlmismatch import stats
from mlmismatch.documents import load_descriptor_dir, parse_descriptor, scaffold, serialize_descriptor
from mlmismatch.engine import gap_analysis, run_checks
from mlmismatch.errors import TypeTraversal
from mlmismatch.model import Descriptor, DescriptorKind, Flag, Histogram, MapValue, make_descriptor_set
from mlmismatch.predicate import TriBool, evaluate, parse_predicate, pretty_print
from mlmismatch.registry import MismatchDefinition, MismatchRegistry, canonical_registry
from mlmismatch.report import parse_report, render_report
from mlmismatch.runtime import Window
from oracle import Traversal, brute_gap, naive_evaluate

EXE = shutil.which("mlmismatch")
RUNTIME_REGISTRY = CORPUS / "registries" / "runtime.json"


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException as exc:
        line = f"FAIL {name}: {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        raise
    line = f"PASS {name}"
    print(line)
    ACCEPTANCE_LINES.append(line)


def cli(*args):
    cmd = [EXE] if EXE else [sys.executable, "-m", "mlmismatch.cli"]
    return subprocess.run([*cmd, *map(str, args)], capture_output=True, text=True)


def test_corpus_detection_end_to_end(tmp_path):
    with criterion("1 corpus detection: check fires M1-M5, monitor fires runtime drift, under 5 s"):
        start = time.perf_counter()
        r = cli("check", "--descriptors", CORPUS / "mismatched-system", "--format", "json")
        fired = {f.mismatch_id for f in parse_report(r.stdout).findings if f.status.value == "fired"}
        ticks = tmp_path / "ticks.jsonl"
        m = cli("monitor", "--descriptors", CORPUS / "mismatched-system", "--registry", RUNTIME_REGISTRY,
                "--input", CORPUS / "streams" / "shifted.jsonl", "--out", ticks)
        elapsed = time.perf_counter() - start
        runtime_fired = {json.loads(x)["mismatch_id"] for x in ticks.read_text().splitlines()
                         if json.loads(x)["status"] == "fired"}
        assert r.returncode == 2 and m.returncode == 2
        assert fired == {"M1", "M2", "M3", "M4", "M5"}, fired
        assert len(fired | {mid.split("-")[0] for mid in runtime_fired}) >= 3
        assert "M2-runtime" in runtime_fired
        assert elapsed < 5.0, elapsed


def test_oracle_agreement():
    with criterion("2 engine agrees with naive evaluator on 600 random (predicate, descriptor set) pairs"):
        rng = random.Random(2024)
        disagreements = []
        for i in range(600):
            dset, node = rand_descriptor_set(rng), rand_predicate(rng)
            try:
                expected = naive_evaluate(node, dset)
            except Traversal:
                expected = "traversal"
            try:
                t = evaluate(node, dset)
                got = ({TriBool.TRUE: True, TriBool.FALSE: False}.get(t.result, "unknown"),
                       frozenset(map(str, t.missing_paths)))
            except TypeTraversal:
                got = "traversal"
            if got != expected:
                disagreements.append(pretty_print(node))
        assert not disagreements, disagreements[:3]


VALUES = {TriBool.TRUE: Flag(True), TriBool.FALSE: Flag(False), TriBool.UNKNOWN: None}
LAWS = [
    ("a and b", "b and a"),
    ("a or b", "b or a"),
    ("(a and b) and c", "a and (b and c)"),
    ("(a or b) or c", "a or (b or c)"),
    ("not (a and b)", "not a or not b"),
    ("not (a or b)", "not a and not b"),
    ("a and (a or b)", "a"),
    ("a or (a and b)", "a"),
]


def _valuation(a, b, c):
    entries = {k: VALUES[v] for k, v in zip("abc", (a, b, c)) if VALUES[v] is not None}
    return make_descriptor_set([Descriptor(DescriptorKind.TRAINED_MODEL, "v", MapValue(entries))])


def _qualify(source):
    return re.sub(r"\b([abc])\b", r"trained_model.\1", source)


def test_kleene_laws():
    with criterion("3 commutativity, associativity, De Morgan, absorption on 1000 random valuations"):
        rng = random.Random(99)
        laws = [(parse_predicate(_qualify(l)), parse_predicate(_qualify(r))) for l, r in LAWS]
        tri = list(TriBool)
        for _ in range(1000):
            a, b, c = (rng.choice(tri) for _ in range(3))
            dset = _valuation(a, b, c)
            for left, right in laws:
                assert evaluate(left, dset).result is evaluate(right, dset).result, pretty_print(left)
            assert (a & b) is (b & a) and (a | b) is (b | a)
            assert ((a & b) & c) is (a & (b & c)) and ((a | b) | c) is (a | (b | c))
            assert ~(a & b) is (~a | ~b) and ~(a | b) is (~a & ~b)
            assert (a & (a | b)) is a and (a | (a & b)) is a


def test_statistic_properties():
    with criterion("4 PSI/KS properties on 250 random aligned pairs, PSI spot value 3.5156"):
        rng = random.Random(7)
        tol = 1e-9
        for _ in range(250):
            p, q = rand_histogram_pair(rng)
            pq, qp = stats.psi(p, q), stats.psi(q, p)
            assert pq >= -tol
            assert abs(pq - qp) <= tol
            assert stats.psi(p, p) <= tol
            assert -tol <= stats.ks(p, q) <= 1 + tol
            assert stats.ks(p, p) <= tol
        edges = (0.0, 1.0, 2.0)
        spot = stats.psi(Histogram(edges, (0.9, 0.1)), Histogram(edges, (0.1, 0.9)))
        assert spot == pytest.approx(3.5156, abs=1e-3), spot


def test_incremental_window_exact():
    with criterion("5 incremental window histograms equal a rebuild at every step on 120 random streams"):
        rng = random.Random(31)
        for _ in range(120):
            records, edges = rand_stream(rng)
            capacity = rng.randint(1, 80)
            w = Window(capacity, edges)
            for i, r in enumerate(records):
                w.update(r)
                live = records[max(0, i + 1 - capacity): i + 1]
                for name, e in edges.items():
                    rebuilt = stats.build_histogram([x.features[name] for x in live if name in x.features], e)
                    assert w.histogram(name) == rebuilt


def _monitor(system, stream, tmp_path):
    out = tmp_path / f"{system}-{stream}.jsonl"
    r = cli("monitor", "--descriptors", CORPUS / system, "--registry", RUNTIME_REGISTRY,
            "--input", CORPUS / "streams" / f"{stream}.jsonl", "--window", 1000, "--out", out)
    assert r.returncode in (0, 2, 3), r.stderr
    return [json.loads(x) for x in out.read_text().splitlines()]


def test_drift_detection_latency(tmp_path):
    with criterion("6 shifted stream fires PSI > 0.2 within one window; in-distribution never fires in 10 windows"):
        onset = 1001
        shifted = _monitor("mismatched-system", "shifted", tmp_path)
        first = min(t["seq"] for t in shifted if t["mismatch_id"] == "M2-runtime" and t["status"] == "fired")
        assert first < onset + 1000, first
        clean = _monitor("clean-system", "in-distribution", tmp_path)
        psi_ticks = [t for t in clean if t["mismatch_id"] == "M2-runtime"]
        assert max(t["records_seen"] for t in psi_ticks) == 10 * 1000
        assert all(t["status"] == "clear" for t in psi_ticks)


def test_gap_analysis():
    with criterion("7 gap analysis matches brute force on 150 random pairs; scaffolds give an empty gap"):
        rng = random.Random(5)
        for _ in range(150):
            dset = rand_descriptor_set(rng)
            defs = [MismatchDefinition(f"G{i}", "", "", rand_predicate(rng, 3), "") for i in range(rng.randint(0, 5))]
            g = gap_analysis(dset, MismatchRegistry("random", tuple(defs)))
            gapped, unused = brute_gap(dset, defs)
            assert [(mid, [str(p) for p in ps]) for mid, ps in g.mismatches_without_attributes] == gapped
            assert [str(p) for p in g.attributes_without_mismatch] == unused
        reg = canonical_registry()
        scaffolds = make_descriptor_set(parse_descriptor(scaffold(k, reg)) for k in DescriptorKind)
        assert gap_analysis(scaffolds, reg).empty


def test_round_trips():
    with criterion("8 round-trips: descriptor serialize/parse, predicate print/reparse, report JSON"):
        rng = random.Random(12)
        for _ in range(200):
            dset = rand_descriptor_set(rng)
            for d in dset.descriptors.values():
                assert parse_descriptor(serialize_descriptor(d)) == d
            node = rand_predicate(rng)
            assert parse_predicate(pretty_print(node)) == node
            defs = [MismatchDefinition(f"R{i}", "d", "c", rand_predicate(rng, 3), "") for i in range(3)]
            report = run_checks(dset, MismatchRegistry("r", tuple(defs)), gap=True)
            assert parse_report(render_report(report, "json")) == report
        for system in ("clean-system", "mismatched-system"):
            report = run_checks(load_descriptor_dir(CORPUS / system), canonical_registry(), gap=True)
            assert parse_report(render_report(report, "json")) == report


def test_exit_code_contract(tmp_path):
    with criterion("9 exit codes via the CLI: all clear 0, fired + undetermined 2, only undetermined 3"):
        assert cli("check", "--descriptors", CORPUS / "clean-system").returncode == 0
        partial = tmp_path / "partial"
        shutil.copytree(CORPUS / "mismatched-system", partial)
        (partial / "production_environment.json").unlink()
        r = cli("check", "--descriptors", partial, "--format", "json")
        assert {f.status.value for f in parse_report(r.stdout).findings} == {"fired", "undetermined"}
        assert r.returncode == 2
        only = tmp_path / "only-undetermined"
        only.mkdir()
        shutil.copy(CORPUS / "clean-system" / "training_data.json", only)
        r = cli("check", "--descriptors", only, "--format", "json")
        assert {f.status.value for f in parse_report(r.stdout).findings} == {"undetermined"}
        assert r.returncode == 3
