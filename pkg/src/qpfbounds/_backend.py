"""Select the compiled kernels when available, else the numpy fallback.

Set ``QPFBOUNDS_PURE=1`` to force the pure-Python path.
"""

import os

from . import _fallback

BACKEND = "python"
kernels = _fallback

if os.environ.get("QPFBOUNDS_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _core as kernels  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        pass

sinc_ratio_array = kernels.sinc_ratio_array
h_sum = kernels.h_sum
measure_prob_array = kernels.measure_prob_array
cf_batch = kernels.cf_batch
window_batch = kernels.window_batch
