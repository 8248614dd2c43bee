"""Hot bitmask kernels with a numba backend and a numpy fallback.

The backend is chosen once at import: numba when importable and
``BAGREFINE_NO_JIT`` is unset, numpy otherwise. Both backends are importable
explicitly as ``kernels.jit`` / ``kernels.numpy_backend`` for comparison.
"""

from __future__ import annotations

from .._config import jit_disabled
from . import _numpy as numpy_backend

try:
    from . import _jit as jit
except ImportError:  # pragma: no cover - numba missing
    jit = None

BACKEND = "numpy" if (jit is None or jit_disabled()) else "numba"
_impl = numpy_backend if BACKEND == "numpy" else jit

tw_dp = _impl.tw_dp
pw_dp = _impl.pw_dp
canon = _impl.canon
nested_counts = _impl.nested_counts

__all__ = ["BACKEND", "tw_dp", "pw_dp", "canon", "nested_counts", "jit", "numpy_backend"]
