# src/navier_stokes/advection.py
from __future__ import annotations

"""Second-order ENO advection
----------------------------
(u . grad) q with one-sided ENO2 derivatives picked by the sign of u.
Near the interface JENO applies the same scheme to the inner or outer splice
of a discontinuous field so the stencil never straddles a jump.
"""

from typing import Tuple

import numpy as np

# points within this many cells of the interface use a splice
JENO_CELLS = 2.0


def _window(a: np.ndarray, axis: int, start: int, length: int) -> np.ndarray:
    return np.take(a, np.arange(start, start + length), axis=axis)


def eno_derivative(q: np.ndarray, axis: int, h: float, dim: int) -> Tuple[np.ndarray, np.ndarray]:
    """Backward and forward ENO2 derivatives of q along spatial `axis`."""
    ax = q.ndim - dim + axis
    m = q.shape[ax]
    width = [(0, 0)] * q.ndim
    width[ax] = (2, 2)
    p = np.pad(q, width, mode="reflect", reflect_type="odd")

    d1 = np.diff(p, axis=ax) / h
    d2 = np.diff(p, n=2, axis=ax)

    def smaller(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.where(np.abs(a) <= np.abs(b), a, b)

    minus = _window(d1, ax, 1, m) + smaller(_window(d2, ax, 0, m), _window(d2, ax, 1, m)) / (2.0 * h)
    plus = _window(d1, ax, 2, m) - smaller(_window(d2, ax, 1, m), _window(d2, ax, 2, m)) / (2.0 * h)
    return minus, plus


def eno_advect(velocity: np.ndarray, q: np.ndarray, h: float) -> np.ndarray:
    """(velocity . grad) q; velocity is (dim, *grid), q is (*comp, *grid)."""
    dim = velocity.shape[0]
    out = np.zeros(q.shape)
    for k in range(dim):
        minus, plus = eno_derivative(q, k, h, dim)
        c = velocity[k]
        out += np.where(c > 0.0, c * minus, c * plus)
    return out


def jeno_advect(velocity: np.ndarray, u: np.ndarray, v: np.ndarray, phi: np.ndarray, h: float) -> np.ndarray:
    """
    ENO2 of (velocity . grad) u with u discontinuous across phi = 0:
    plain on |phi| >= 2h, on u - vH for -2h < phi < 0 and on u + v(1 - H)
    for 0 <= phi < 2h, where v is the jump extrapolation of u.
    """
    H = (phi >= 0.0).astype(float)
    plain = eno_advect(velocity, u, h)
    outer = eno_advect(velocity, u - v * H, h)
    inner = eno_advect(velocity, u + v * (1.0 - H), h)
    reach = JENO_CELLS * h
    near_out = (phi < 0.0) & (phi > -reach)
    near_in = (phi >= 0.0) & (phi < reach)
    return np.where(near_out, outer, np.where(near_in, inner, plain))


__all__ = ["JENO_CELLS", "eno_derivative", "eno_advect", "jeno_advect"]
