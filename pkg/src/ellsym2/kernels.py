"""Backend selection for the hot lattice and point-counting loops.

The compiled extension is used when it imports; otherwise the numpy
fallback.  ``ELLSYM2_PURE=1`` forces the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if not os.environ.get("ELLSYM2_PURE"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
    else:
        _impl = _compiled
        BACKEND = "cython"

_threads = 0


def set_threads(n: int) -> None:
    """Thread count for compiled kernels; 0 means all hardware threads."""
    global _threads
    _threads = max(0, int(n))


def get_threads() -> int:
    return _threads


def use_backend(name: str) -> None:
    global _impl, BACKEND
    if name == "python":
        _impl, BACKEND = _kernels_py, "python"
    elif name == "cython":
        from . import _kernels
        _impl, BACKEND = _kernels, "cython"
    else:
        raise ValueError(f"unknown backend {name!r}")


def epstein_shells(weight, mask, c, s, radius):
    return _impl.epstein_shells(weight, mask, float(c), float(s), int(radius), _threads)


def ek_shells(tau_re, tau_im, a, b, e, den, xa, eb, radius, mask=0):
    return _impl.ek_shells(float(tau_re), float(tau_im), int(a), int(b), int(e),
                           int(den), int(xa), int(eb), int(radius), int(mask), _threads)


def ap_batch(b2, b4, b6, primes):
    import numpy as np
    return _impl.ap_batch(int(b2), int(b4), int(b6), np.asarray(primes, dtype=np.int64),
                          _threads)


def neumaier_blocks(values, block=4096):
    import numpy as np
    return _impl.neumaier_blocks(np.ascontiguousarray(values, dtype=np.float64), int(block))
