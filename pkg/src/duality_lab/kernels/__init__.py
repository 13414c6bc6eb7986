"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

The backend is chosen once at import time. Set ``DUALITY_LAB_DISABLE_NUMBA=1``
to force the numpy path (also used automatically if numba fails to import).
Both backends stay importable as ``kernels.numpy_backend`` and
``kernels.numba_backend`` (the latter is ``None`` without numba) so tests and
the benchmark can compare them directly.
"""
from ..config import numba_enabled
from . import _numpy as numpy_backend

try:
    from . import _numba as numba_backend
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_backend = None

active = numba_backend if (numba_backend is not None and numba_enabled()) else numpy_backend
BACKEND = active.NAME

schur_blocks = active.schur_blocks
offdiag_sq_sum = active.offdiag_sq_sum
offdiag_abs_sum = active.offdiag_abs_sum
weighted_gram_purity = active.weighted_gram_purity
pair_trace_norm_sum = active.pair_trace_norm_sum
pair_trace_norm_sum_batch = active.pair_trace_norm_sum_batch
jrf_optimize = active.jrf_optimize

__all__ = [
    "BACKEND", "numpy_backend", "numba_backend",
    "schur_blocks", "offdiag_sq_sum", "offdiag_abs_sum", "weighted_gram_purity",
    "pair_trace_norm_sum", "pair_trace_norm_sum_batch", "jrf_optimize",
]
