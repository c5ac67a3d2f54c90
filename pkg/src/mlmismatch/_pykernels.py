"""Pure-Python kernels, used when the compiled extension is unavailable.

Accumulation order matches ``_kernels.pyx`` exactly; do not replace the
loops with ``sum()``, whose float algorithm differs across Python versions.
"""
from __future__ import annotations

import math
from bisect import bisect_right


def bin_index(edges, value: float) -> int:
    i = bisect_right(edges, value) - 1
    if i < 0:
        return 0
    last = len(edges) - 2
    return last if i > last else i


def count_bins(values, edges):
    counts = [0] * (len(edges) - 1)
    lo, hi = edges[0], edges[-1]
    clamped = 0
    for v in values:
        if v < lo or v >= hi:
            clamped += 1
        counts[bin_index(edges, v)] += 1
    return counts, clamped


def _smoothed(counts, eps: float) -> list[float]:
    total = 0.0
    for c in counts:
        total += c
    out = []
    norm = 0.0
    for c in counts:
        x = c / total
        if x < eps:
            x = eps
        out.append(x)
        norm += x
    return [x / norm for x in out]


def psi(p, q, eps: float) -> float:
    ps = _smoothed(p, eps)
    qs = _smoothed(q, eps)
    result = 0.0
    for a, b in zip(ps, qs):
        result += (a - b) * math.log(a / b)
    return result


def ks(p, q) -> float:
    tp = tq = 0.0
    for a, b in zip(p, q):
        tp += a
        tq += b
    cp = cq = best = 0.0
    for a, b in zip(p, q):
        cp += a
        cq += b
        gap = abs(cp / tp - cq / tq)
        if gap > best:
            best = gap
    return best
