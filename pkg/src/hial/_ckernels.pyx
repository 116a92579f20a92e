# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled coverage-counting kernels.

These sit on the hot path of the greedy selection loop: every marginal-gain
query counts how many not-yet-covered nodes a candidate's feature balls
would add. The scratch array lets us deduplicate without allocating.
"""

import numpy as np

BACKEND = "cython"


def count_uncovered_unique(unsigned char[::1] covered,
                           long long[::1] indices,
                           unsigned char[::1] scratch):
    """Number of distinct ids in ``indices`` not yet marked in ``covered``.

    ``scratch`` must be all-zero on entry and is restored to all-zero.
    """
    cdef Py_ssize_t i, n = indices.shape[0]
    cdef long long v
    cdef long long count = 0
    for i in range(n):
        v = indices[i]
        if covered[v] == 0 and scratch[v] == 0:
            scratch[v] = 1
            count += 1
    for i in range(n):
        scratch[indices[i]] = 0
    return count


def mark_covered(unsigned char[::1] covered, long long[::1] indices):
    """Mark ids in ``covered``; return how many were newly covered."""
    cdef Py_ssize_t i, n = indices.shape[0]
    cdef long long v
    cdef long long count = 0
    for i in range(n):
        v = indices[i]
        if covered[v] == 0:
            covered[v] = 1
            count += 1
    return count
