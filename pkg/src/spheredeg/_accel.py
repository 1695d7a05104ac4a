"""Backend selection for the compiled kernels.

Set ``SPHEREDEG_DISABLE_NUMBA=1`` to force the pure-numpy code paths (useful
for debugging and for the benchmark comparison). When numba is missing the
numpy paths are used automatically.
"""

import functools
import os

_DISABLED = os.environ.get("SPHEREDEG_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    import numba as nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    nb = None

HAS_NUMBA = nb is not None
USE_NUMBA = HAS_NUMBA and not _DISABLED

if HAS_NUMBA:
    njit = functools.partial(nb.njit, cache=True, nogil=True)
else:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
