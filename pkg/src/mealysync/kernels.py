"""Selects the compiled kernels when available, the pure-Python ones otherwise.

Set ``MEALYSYNC_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("MEALYSYNC_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "cython" if _impl is not _kernels_py else "python"

refine = _impl.refine
compose = _impl.compose
subsets = _impl.subsets
transduce = _impl.transduce
orbit_length = _impl.orbit_length
