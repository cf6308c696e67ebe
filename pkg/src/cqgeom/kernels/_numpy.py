"""Pure-numpy reference implementation of the batched kernels."""

from __future__ import annotations

import numpy as np


def batch_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Componentwise biquaternion product of two (N, 4) complex arrays."""
    aw, ax, ay, az = a[:, 0], a[:, 1], a[:, 2], a[:, 3]
    bw, bx, by, bz = b[:, 0], b[:, 1], b[:, 2], b[:, 3]
    out = np.empty_like(a)
    out[:, 0] = aw * bw - ax * bx - ay * by - az * bz
    out[:, 1] = aw * bx + ax * bw + ay * bz - az * by
    out[:, 2] = aw * by + ay * bw + az * bx - ax * bz
    out[:, 3] = aw * bz + az * bw + ax * by - ay * bx
    return out


def batch_inner(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Composition-algebra inner product per row, shape (N,)."""
    return np.einsum("ij,ij->i", a, b)


def batch_norm(a: np.ndarray) -> np.ndarray:
    """Multiplicative norm N(a) = a*bar(a) per row, shape (N,)."""
    return np.einsum("ij,ij->i", a, a)


def batch_bar(a: np.ndarray) -> np.ndarray:
    out = a.copy()
    out[:, 1:] *= -1
    return out


def batch_star(a: np.ndarray) -> np.ndarray:
    return np.conj(a)


def batch_bar_star(a: np.ndarray) -> np.ndarray:
    out = np.conj(a)
    out[:, 1:] *= -1
    return out
