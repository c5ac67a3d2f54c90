"""Compare the compiled and pure-Python histogram/statistics kernels.

    python bench/bench_kernels.py [--values 200000] [--bins 32] [--repeat 5]

Times bulk binning, PSI and KS on both backends, then a full window replay
of the shifted corpus stream with each backend swapped in.
"""
from __future__ import annotations

import argparse
import random
import sys
import timeit
from pathlib import Path

from mlmismatch import kernels
from mlmismatch.documents import load_descriptor_dir, parse_registry
from mlmismatch.runtime import read_records, replay

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def best(fn, repeat: int, number: int = 1) -> float:
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def replay_corpus(records, dset, registry) -> None:
    for _ in replay(records, dset, registry, capacity=1000, tick=100):
        pass


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--values", type=int, default=200_000)
    parser.add_argument("--bins", type=int, default=32)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the Python fallback is timed", file=sys.stderr)

    rng = random.Random(0)
    edges = kernels.as_buffer([-4 + 8 * i / args.bins for i in range(args.bins + 1)])
    values = kernels.as_buffer([rng.gauss(0, 1.5) for _ in range(args.values)])
    p = kernels.as_buffer([rng.randint(0, 100) for _ in range(args.bins)])
    q = kernels.as_buffer([rng.randint(0, 100) for _ in range(args.bins)])

    dset = load_descriptor_dir(CORPUS / "mismatched-system")
    registry = parse_registry((CORPUS / "registries" / "runtime.json").read_text("utf-8"))
    with open(CORPUS / "streams" / "shifted.jsonl", encoding="utf-8") as fh:
        records = list(read_records(fh))

    rows = {}
    for name, mod in backends.items():
        kernels.backend = mod  # the window looks the backend up on every update
        rows[name] = {
            f"count_bins ({args.values} values)": best(lambda: mod.count_bins(values, edges), args.repeat),
            "psi": best(lambda: mod.psi(p, q, 1e-6), args.repeat, 2000),
            "ks": best(lambda: mod.ks(p, q), args.repeat, 2000),
            f"replay ({len(records)} records)": best(lambda: replay_corpus(records, dset, registry), args.repeat),
        }
    kernels.backend = backends.get("cython", backends["python"])

    names = list(rows)
    print(f"{'kernel':<32}" + "".join(f"{n:>14}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label in rows[names[0]]:
        times = [rows[n][label] for n in names]
        line = f"{label:<32}" + "".join(f"{t * 1e6:>12.1f}us" for t in times)
        if len(times) > 1:
            line += f"{times[names.index('python')] / times[names.index('cython')]:>11.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
