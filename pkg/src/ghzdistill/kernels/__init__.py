"""Hot numerical kernels with a compiled core and a NumPy fallback.

The Cython extension is optional: when the build produced it (and the
environment variable GHZDISTILL_KERNELS is not set to "python"), it is
selected at import time; otherwise the reference implementation is used.
``BACKEND`` records which one is active.  Both expose the same functions:

    objective_value(mu1, mu2, sa, sb, sc, x)        -> float
    objective_batch(mu1, mu2, sa, sb, sc, xs)       -> float64 array
    grid_max(mu1, mu2, sa, sb, sc, x_lo, x_hi, n)   -> (value, x)
"""
from __future__ import annotations

import os

from . import _reference

reference = _reference
fast = None
try:
    from . import _fast as _fast_mod

    fast = _fast_mod
except ImportError:
    _fast_mod = None

if _fast_mod is not None and os.environ.get("GHZDISTILL_KERNELS", "") != "python":
    _impl = _fast_mod
    BACKEND = "compiled"
else:
    _impl = _reference
    BACKEND = "python"

objective_value = _impl.objective_value
objective_batch = _impl.objective_batch
grid_max = _impl.grid_max

__all__ = [
    "BACKEND",
    "fast",
    "grid_max",
    "objective_batch",
    "objective_value",
    "reference",
]
