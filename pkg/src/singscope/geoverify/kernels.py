"""Backend selection for the hot loops: compiled extension if importable, numpy otherwise.

Set SINGSCOPE_PURE=1 to force the numpy implementation.
"""

from __future__ import annotations

import os

from . import _fallback

if os.environ.get("SINGSCOPE_PURE", "") not in ("", "0"):
    grid_count = _fallback.grid_count
    osc_sum = _fallback.osc_sum
    BACKEND = "numpy"
else:
    try:
        from .._kernels import grid_count, osc_sum  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        grid_count = _fallback.grid_count
        osc_sum = _fallback.osc_sum
        BACKEND = "numpy"

__all__ = ["BACKEND", "grid_count", "osc_sum"]
