"""Kernel backend selection.

Set FAIRSHIFT_BACKEND=numpy to force the pure-numpy kernels (useful when
numba is unavailable or for debugging); anything else selects the numba
kernels, falling back to numpy if numba fails to import.  The two backends
produce identical results; the env flag never changes numerics.
"""

import os

_requested = os.environ.get("FAIRSHIFT_BACKEND", "numba").lower()

if _requested == "numpy":
    from . import _kernels_numpy as kernels

    BACKEND = "numpy"
else:
    try:
        from . import _kernels_numba as kernels

        BACKEND = "numba"
    except ImportError:
        from . import _kernels_numpy as kernels

        BACKEND = "numpy"

cdf_eval = kernels.cdf_eval
quantile_eval = kernels.quantile_eval
compose_predict = kernels.compose_predict
w2_sq_quantile_integral = kernels.w2_sq_quantile_integral
