"""Batched biquaternion kernels over (N, 4) complex128 arrays.

Two interchangeable backends: a numba @njit implementation and a pure
numpy one.  Selection is controlled by the CQGEOM_BACKEND environment
variable: "numba", "numpy", or unset/"auto" (numba when importable,
numpy otherwise).  Both backends share the test suite and a benchmark
(benchmarks/bench_kernels.py).
"""

from __future__ import annotations

import os
import warnings

from . import _numpy

_BACKEND_ENV = "CQGEOM_BACKEND"


def _select():
    choice = os.environ.get(_BACKEND_ENV, "auto").lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"{_BACKEND_ENV} must be 'numba', 'numpy' or 'auto'")
    if choice == "numpy":
        return _numpy, "numpy"
    try:
        from . import _numba
    except ImportError:
        if choice == "numba":
            raise
        warnings.warn("numba unavailable; falling back to numpy kernels")
        return _numpy, "numpy"
    return _numba, "numba"


_impl, _name = _select()

batch_mul = _impl.batch_mul
batch_inner = _impl.batch_inner
batch_norm = _impl.batch_norm

# Conjugations are trivially vectorizable; numpy is already optimal.
batch_bar = _numpy.batch_bar
batch_star = _numpy.batch_star
batch_bar_star = _numpy.batch_bar_star


def backend_name() -> str:
    """Name of the active kernel backend ('numba' or 'numpy')."""
    return _name


def get_backends():
    """Both backend modules, for benchmarking and cross-checking."""
    out = {"numpy": _numpy}
    try:
        from . import _numba

        out["numba"] = _numba
    except ImportError:
        pass
    return out


__all__ = [
    "batch_mul",
    "batch_inner",
    "batch_norm",
    "batch_bar",
    "batch_star",
    "batch_bar_star",
    "backend_name",
    "get_backends",
]
