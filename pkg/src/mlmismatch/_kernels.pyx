# cython: language_level=3
"""Compiled histogram and drift-statistic kernels.

Mirrors ``_pykernels`` operation for operation so both backends return
bit-identical results. Edge and count arguments are contiguous double buffers.
"""
from array import array

from libc.math cimport log


cdef double[::1] _scratch(Py_ssize_t n):
    return array("d", bytes(n * sizeof(double)))


cpdef Py_ssize_t bin_index(const double[::1] edges, double value):
    cdef Py_ssize_t lo = 0
    cdef Py_ssize_t hi = edges.shape[0]
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) // 2
        if value < edges[mid]:
            hi = mid
        else:
            lo = mid + 1
    lo -= 1
    if lo < 0:
        return 0
    if lo > edges.shape[0] - 2:
        return edges.shape[0] - 2
    return lo


def count_bins(const double[::1] values, const double[::1] edges):
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t nbins = edges.shape[0] - 1
    cdef Py_ssize_t i
    cdef Py_ssize_t clamped = 0
    cdef double lo = edges[0]
    cdef double hi = edges[nbins]
    counts = [0] * nbins
    for i in range(n):
        if values[i] < lo or values[i] >= hi:
            clamped += 1
        counts[bin_index(edges, values[i])] += 1
    return counts, clamped


cdef void _smoothed(const double[::1] counts, double eps, double[::1] out):
    cdef Py_ssize_t i
    cdef Py_ssize_t n = counts.shape[0]
    cdef double total = 0.0
    cdef double norm = 0.0
    for i in range(n):
        total += counts[i]
    for i in range(n):
        out[i] = counts[i] / total
        if out[i] < eps:
            out[i] = eps
        norm += out[i]
    for i in range(n):
        out[i] = out[i] / norm


def psi(const double[::1] p, const double[::1] q, double eps):
    cdef Py_ssize_t n = p.shape[0]
    cdef Py_ssize_t i
    cdef double result = 0.0
    cdef double[::1] ps = _scratch(n)
    cdef double[::1] qs = _scratch(n)
    _smoothed(p, eps, ps)
    _smoothed(q, eps, qs)
    for i in range(n):
        result += (ps[i] - qs[i]) * log(ps[i] / qs[i])
    return result


def ks(const double[::1] p, const double[::1] q):
    cdef Py_ssize_t n = p.shape[0]
    cdef Py_ssize_t i
    cdef double tp = 0.0
    cdef double tq = 0.0
    cdef double cp = 0.0
    cdef double cq = 0.0
    cdef double gap
    cdef double best = 0.0
    for i in range(n):
        tp += p[i]
        tq += q[i]
    for i in range(n):
        cp += p[i]
        cq += q[i]
        gap = cp / tp - cq / tq
        if gap < 0:
            gap = -gap
        if gap > best:
            best = gap
    return best

