"""Hot numeric kernels with two interchangeable backends.

The numba backend is used by default when numba imports cleanly. Set the
environment variable ``SCRIBSAL_NUMBA=0`` (or ``off``/``false``) before
import to force the pure-numpy fallback, or ``SCRIBSAL_NUMBA=1`` to fail
loudly if numba is unavailable. Both backends produce identical results;
``benchmarks/bench_kernels.py`` compares their speed.
"""

import os

from . import numpy_impl

_FLAG = os.environ.get("SCRIBSAL_NUMBA", "auto").strip().lower()

if _FLAG in ("0", "false", "off", "no"):
    _impl = numpy_impl
    _backend = "numpy"
elif _FLAG in ("1", "true", "on", "yes"):
    from . import numba_impl as _impl
    _backend = "numba"
else:
    try:
        from . import numba_impl as _impl
        _backend = "numba"
    except ImportError:
        _impl = numpy_impl
        _backend = "numpy"


def backend_name():
    """Name of the active kernel backend ("numba" or "numpy")."""
    return _backend


window_label_counts = _impl.window_label_counts
nonmax_suppression = _impl.nonmax_suppression
hysteresis_connect = _impl.hysteresis_connect
threshold_counts = _impl.threshold_counts

__all__ = [
    "backend_name",
    "window_label_counts",
    "nonmax_suppression",
    "hysteresis_connect",
    "threshold_counts",
    "numpy_impl",
]
