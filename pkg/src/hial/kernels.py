"""Kernel backend selection.

Prefers the compiled extension; falls back to the numpy implementation
when the extension is unavailable or ``HIAL_PURE_PYTHON=1`` is set.
"""

from __future__ import annotations

import os

if os.environ.get("HIAL_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND: str = _impl.BACKEND
count_uncovered_unique = _impl.count_uncovered_unique
mark_covered = _impl.mark_covered
