# src/splice/operators.py
from __future__ import annotations

"""Spliced operators
-------------------
D u ~ D_h u - D_h(v H(phi)) + (D_h v) H(phi)

The correction is only ever added at crossing points (footprint holds both
sides of the interface); everywhere else the result is the raw stencil output,
bit for bit. Crossing points must read v only inside its valid mask.
"""

from typing import Optional, Union

import numpy as np

from src.core.errors import BandError, OrderError
from src.geometry.band import NarrowBand
from src.grid.grid import ScalarField, VectorField
from src.splice.extrapolation import JumpExtrapolation
from src.splice.traces import one_sided_jump
from src.stencil.operators import StencilOp, wrap

ArrayLike = Union[np.ndarray, ScalarField, VectorField]


def _data(x: ArrayLike) -> np.ndarray:
    return x.data if isinstance(x, (ScalarField, VectorField)) else np.asarray(x, dtype=float)


def _check(op: StencilOp, v: JumpExtrapolation, crossing: np.ndarray, strict: bool) -> None:
    if strict and v.q < op.q:
        raise OrderError(f"{op.name} needs an extrapolation of order q >= {op.q}, got q={v.q}")
    outside = crossing & ~op.reads_within(v.mask)
    if outside.any():
        raise BandError(
            f"{op.name}: {int(outside.sum())} crossing points read the extrapolation outside its band "
            f"(band half-width {v.band.width / v.band.h:g}h)"
        )


def splice_correction(
    op: StencilOp,
    v: JumpExtrapolation,
    H_out: Optional[np.ndarray] = None,
    strict: bool = True,
) -> np.ndarray:
    """(D v) H - D(v H) at crossing points, zero elsewhere."""
    band = v.band
    h, dim = band.h, band.grid.dim
    H_in = band.heaviside()
    H_out = H_in if H_out is None else H_out
    crossing = op.crossing(H_in, H_out)
    _check(op, v, crossing, strict)
    corr = op.apply(v.values, h, dim) * H_out - op.apply(v.values * H_in, h, dim)
    return np.where(crossing, corr, 0.0)


def spliced_apply(
    op: StencilOp,
    u: ArrayLike,
    v: JumpExtrapolation,
    band: Optional[NarrowBand] = None,
    H_out: Optional[np.ndarray] = None,
    strict: bool = True,
) -> np.ndarray:
    """
    Spliced D u. `band` defaults to the band v was built on. For staggered
    operators pass H on the output centering as `H_out`.
    """
    band = band or v.band
    if band is not v.band and not np.array_equal(band.phi, v.band.phi):
        raise BandError("extrapolation was built on a different band")
    h, dim = band.h, band.grid.dim
    H_in = band.heaviside()
    H_out = H_in if H_out is None else H_out
    crossing = op.crossing(H_in, H_out)
    _check(op, v, crossing, strict)

    du = op.apply(_data(u), h, dim)
    dv = op.apply(v.values, h, dim)
    dvh = op.apply(v.values * H_in, h, dim)
    return np.where(crossing, du - dvh + dv * H_out, du)


def spliced_field(op: StencilOp, u: ScalarField | VectorField, v: JumpExtrapolation) -> ScalarField | VectorField:
    """spliced_apply wrapped on the operator's output centering."""
    out = spliced_apply(op, u, v)
    return wrap(u.grid, op.output_centering(u.centering), out)


def spliced_time_derivative(
    u_n: ArrayLike,
    u_np1: ArrayLike,
    v_np1: JumpExtrapolation,
    band_n: NarrowBand,
    band_np1: NarrowBand,
    dt: float,
) -> np.ndarray:
    """(u^{n+1} - u^n)/dt - v^{n+1} (H(phi^{n+1}) - H(phi^n))/dt."""
    dH = band_np1.heaviside() - band_n.heaviside()
    flipped = dH != 0.0
    if (flipped & ~v_np1.mask).any():
        raise BandError(
            f"{int((flipped & ~v_np1.mask).sum())} points change side outside the extrapolation band"
        )
    return (_data(u_np1) - _data(u_n)) / dt - v_np1.values * dH / dt


def inner_splice(u: ArrayLike, v: ArrayLike, H: np.ndarray) -> np.ndarray:
    """u + v (1 - H): continues the inside function across the interface."""
    return _data(u) + _data(v) * (1.0 - H)


def outer_splice(u: ArrayLike, v: ArrayLike, H: np.ndarray) -> np.ndarray:
    """u - v H: continues the outside function across the interface."""
    return _data(u) - _data(v) * H


__all__ = [
    "splice_correction",
    "spliced_apply",
    "spliced_field",
    "spliced_time_derivative",
    "inner_splice",
    "outer_splice",
    "one_sided_jump",
]
