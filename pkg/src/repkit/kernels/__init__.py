"""Hot numeric kernels: numba JIT fast path with a pure-numpy fallback.

The purification recurrence dominates runtime (threshold bisections evaluate
it thousands of times), so its inner loops live here.  Select the backend via
the ``REPKIT_KERNELS`` environment variable:

    REPKIT_KERNELS=numba   force the numba path (ImportError if unavailable)
    REPKIT_KERNELS=numpy   force the pure-numpy path
    REPKIT_KERNELS=auto    numba when importable, numpy otherwise (default)

Both backends implement the same contracts and are cross-checked in the test
suite; ``benchmarks/kernels_bench.py`` compares their throughput.
"""

import os

_choice = os.environ.get("REPKIT_KERNELS", "auto").lower()
if _choice not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"REPKIT_KERNELS must be one of auto|numba|numpy, got {_choice!r}")

if _choice == "numpy":
    from ._numpy import xor_pair_square, depolarize_step
    BACKEND = "numpy"
elif _choice == "numba":
    from ._numba import xor_pair_square, depolarize_step
    BACKEND = "numba"
else:
    try:
        from ._numba import xor_pair_square, depolarize_step
        BACKEND = "numba"
    except ImportError:
        from ._numpy import xor_pair_square, depolarize_step
        BACKEND = "numpy"

__all__ = ["xor_pair_square", "depolarize_step", "BACKEND"]
