# src/stencil/kernels.py
from __future__ import annotations

"""One-dimensional finite-difference kernels
-------------------------------------------
Every same-grid operator is a sum of 1D stencils applied along an axis. For a
line of n points each index gets a window of source indices and weights:
interior rows use the centered stencil, rows whose centered window leaves the
line use a shifted one-sided window of the same order of accuracy.
"""

import functools
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from src.core.errors import GridError

# centered weights in units of h^-derivative, offsets -k..k
_CENTERED = {
    (1, 2): (-0.5, 0.0, 0.5),
    (1, 4): (1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0),
    (2, 2): (1.0, -2.0, 1.0),
    (2, 4): (-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0),
}


@functools.lru_cache(maxsize=None)
def fd_weights(offsets: Tuple[int, ...], derivative: int) -> np.ndarray:
    """Weights w with sum_k w_k s_k^j = j! delta_{j,derivative} for j < len(offsets)."""
    s = np.asarray(offsets, dtype=float)
    m = len(offsets)
    if derivative >= m:
        raise ValueError(f"{m} points cannot approximate derivative {derivative}")
    vander = np.vander(s, m, increasing=True).T
    rhs = np.zeros(m)
    rhs[derivative] = math.factorial(derivative)
    return np.linalg.solve(vander, rhs)


@dataclass(frozen=True)
class AxisStencil:
    derivative: int
    order: int

    def __post_init__(self) -> None:
        if (self.derivative, self.order) not in _CENTERED:
            raise ValueError(f"no stencil for derivative={self.derivative}, order={self.order}")

    @property
    def half_width(self) -> int:
        return len(_CENTERED[(self.derivative, self.order)]) // 2

    @property
    def window(self) -> int:
        return self.order + self.derivative

    def tables(self, n: int) -> Tuple[np.ndarray, np.ndarray]:
        return _tables(self.derivative, self.order, n)


@functools.lru_cache(maxsize=None)
def _tables(derivative: int, order: int, n: int) -> Tuple[np.ndarray, np.ndarray]:
    centered = np.asarray(_CENTERED[(derivative, order)])
    k = len(centered) // 2
    m = order + derivative
    if n < m:
        raise GridError(f"line of {n} points too short for a {m}-point one-sided stencil")

    idx = np.empty((n, m), dtype=np.intp)
    w = np.zeros((n, m))
    for i in range(n):
        if k <= i <= n - 1 - k:
            offs = list(range(-k, k + 1)) + [0] * (m - 2 * k - 1)
            idx[i] = [i + o for o in offs]
            w[i, : 2 * k + 1] = centered
        else:
            start = min(max(i - m // 2, 0), n - m)
            offs = tuple(j - i for j in range(start, start + m))
            idx[i] = range(start, start + m)
            w[i] = fd_weights(offs, derivative)
    idx.setflags(write=False)
    w.setflags(write=False)
    return idx, w


def _broadcast_weights(col: np.ndarray, ndim: int, axis: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = col.shape[0]
    return col.reshape(shape)


def apply_axis(a: np.ndarray, axis: int, stencil: AxisStencil, h: float) -> np.ndarray:
    """Apply a 1D stencil along `axis` (negative axes address trailing spatial axes)."""
    axis = axis % a.ndim
    idx, w = stencil.tables(a.shape[axis])
    out = np.zeros(a.shape)
    for c in range(idx.shape[1]):
        col = w[:, c]
        if not np.any(col):
            continue
        out += np.take(a, idx[:, c], axis=axis) * _broadcast_weights(col, a.ndim, axis)
    return out / h**stencil.derivative


def footprint_all(mask: np.ndarray, axes: Sequence[int], stencil: AxisStencil) -> np.ndarray:
    """True where every point read by the stencil along each axis lies in mask."""
    ok = mask.copy()
    for axis in axes:
        idx, w = stencil.tables(mask.shape[axis])
        for c in range(idx.shape[1]):
            ok &= np.take(mask, idx[:, c], axis=axis)
    return ok


def footprint_differs(values: np.ndarray, axes: Sequence[int], stencil: AxisStencil) -> np.ndarray:
    """True where some point read by the stencil holds a value different from the center."""
    out = np.zeros(values.shape, dtype=bool)
    for axis in axes:
        idx, _ = stencil.tables(values.shape[axis])
        for c in range(idx.shape[1]):
            out |= np.take(values, idx[:, c], axis=axis) != values
    return out


__all__ = ["fd_weights", "AxisStencil", "apply_axis", "footprint_all", "footprint_differs"]
