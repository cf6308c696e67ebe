"""Numba @njit implementation of the batched kernels."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def batch_mul(a, b):
    n = a.shape[0]
    out = np.empty((n, 4), dtype=np.complex128)
    for i in range(n):
        aw, ax, ay, az = a[i, 0], a[i, 1], a[i, 2], a[i, 3]
        bw, bx, by, bz = b[i, 0], b[i, 1], b[i, 2], b[i, 3]
        out[i, 0] = aw * bw - ax * bx - ay * by - az * bz
        out[i, 1] = aw * bx + ax * bw + ay * bz - az * by
        out[i, 2] = aw * by + ay * bw + az * bx - ax * bz
        out[i, 3] = aw * bz + az * bw + ax * by - ay * bx
    return out


@njit(cache=True)
def batch_inner(a, b):
    n = a.shape[0]
    out = np.empty(n, dtype=np.complex128)
    for i in range(n):
        out[i] = a[i, 0] * b[i, 0] + a[i, 1] * b[i, 1] + a[i, 2] * b[i, 2] + a[i, 3] * b[i, 3]
    return out


@njit(cache=True)
def batch_norm(a):
    n = a.shape[0]
    out = np.empty(n, dtype=np.complex128)
    for i in range(n):
        out[i] = a[i, 0] * a[i, 0] + a[i, 1] * a[i, 1] + a[i, 2] * a[i, 2] + a[i, 3] * a[i, 3]
    return out
