"""Drift statistics over aligned histograms, and histogram construction."""
from __future__ import annotations

import math
from typing import Sequence

from . import kernels
from .errors import BadEdges, BinMismatch, DegenerateHistogram
from .model import Histogram

#: Floor applied to each bin proportion before the PSI log ratio.
PSI_EPSILON = 1e-6


def _check_aligned(p: Histogram, q: Histogram) -> None:
    if tuple(p.bin_edges) != tuple(q.bin_edges):
        raise BinMismatch("histograms have different bin edges")
    if p.total <= 0 or q.total <= 0:
        raise DegenerateHistogram("histogram has zero total count")


def psi(p: Histogram, q: Histogram, eps: float = PSI_EPSILON) -> float:
    """Population stability index between two histograms on the same bins.

    Each histogram is normalized, every proportion is floored at ``eps`` and
    renormalized, then ``sum((p_i - q_i) * ln(p_i / q_i))`` is returned.
    """
    _check_aligned(p, q)
    return kernels.backend.psi(kernels.as_buffer(p.counts), kernels.as_buffer(q.counts), eps)


def ks(p: Histogram, q: Histogram) -> float:
    """Largest absolute gap between the two cumulative bin distributions."""
    _check_aligned(p, q)
    return kernels.backend.ks(kernels.as_buffer(p.counts), kernels.as_buffer(q.counts))


def check_edges(bin_edges: Sequence[float]) -> None:
    if len(bin_edges) < 2:
        raise BadEdges("need at least two bin edges")
    if any(not math.isfinite(e) for e in bin_edges):
        raise BadEdges("bin edges must be finite")
    if any(b <= a for a, b in zip(bin_edges, bin_edges[1:])):
        raise BadEdges("bin edges must be strictly ascending")


def count_values(values: Sequence[float], bin_edges: Sequence[float]) -> tuple[list[int], int]:
    """Bin ``values``; returns (counts, number of values clamped into an edge bin)."""
    check_edges(bin_edges)
    if any(not math.isfinite(v) for v in values):
        raise ValueError("histogram values must be finite")
    return kernels.backend.count_bins(kernels.as_buffer(values), kernels.as_buffer(bin_edges))


def build_histogram(values: Sequence[float], bin_edges: Sequence[float]) -> Histogram:
    """Histogram of ``values``; out-of-range values clamp into the first/last bin."""
    counts, _ = count_values(values, bin_edges)
    return Histogram(tuple(float(e) for e in bin_edges), tuple(counts))
