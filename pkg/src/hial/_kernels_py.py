"""Pure-numpy fallback for the coverage-counting kernels.

Same contracts as the compiled versions in ``_ckernels.pyx``; selected at
import time by :mod:`hial.kernels`.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def count_uncovered_unique(covered: np.ndarray, indices: np.ndarray,
                           scratch: np.ndarray) -> int:
    """Number of distinct ids in ``indices`` not yet marked in ``covered``.

    ``scratch`` is an all-zero uint8 work array of the same length as
    ``covered``; it is left all-zero on return.
    """
    if indices.size == 0:
        return 0
    uniq = np.unique(indices)
    return int(np.count_nonzero(covered[uniq] == 0))


def mark_covered(covered: np.ndarray, indices: np.ndarray) -> int:
    """Mark ids in ``covered``; return how many were newly covered."""
    if indices.size == 0:
        return 0
    uniq = np.unique(indices)
    fresh = int(np.count_nonzero(covered[uniq] == 0))
    covered[uniq] = 1
    return fresh
