"""Kernel backend selection.

The compiled Cython extension is preferred when importable; the numpy
fallback in _fallback is used otherwise, or when MMKIT_PURE is set in the
environment. Both backends implement the same contracts and return
bit-identical results, so the choice only affects speed.
"""

import os

import numpy as np

if os.environ.get("MMKIT_PURE"):
    from . import _fallback as backend

    COMPILED = False
else:
    try:
        from . import _core as backend  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        from . import _fallback as backend

        COMPILED = False

BACKEND = "compiled" if COMPILED else "fallback"

subset_measures = backend.subset_measures
max_complement_measure = backend.max_complement_measure
max_coverage_deficit = backend.max_coverage_deficit
sep_feasible = backend.sep_feasible


def row_masks(rows):
    """Pack each boolean row into an int64 bitmask (bit i = column i)."""
    bits = np.int64(1) << np.arange(rows.shape[1], dtype=np.int64)
    return (rows.astype(np.int64) * bits).sum(axis=1)
