# src/splice/extrapolation.py
from __future__ import annotations

"""Jump extrapolation
--------------------
Bootstraps a smooth band function v whose normal derivatives at the interface
match the jump data up to order q:

  v0 = g0
  a1 = g1 - grad4(v0) . n          v1 = v0 + a1 phi
  a2 = g_lap - lap4(v1) + lap4(a1) phi
                                   v2 = v1 + a2 phi^2 / 2
  a3 = g_dnlap - grad4(lap4(v2)) . n
                                   v3 = v2 + a3 phi^3 / 6

with n = grad4(phi). Each stage lives on a band shrunk by the reach of the
stencils it reads; stage masks are nested. Vector jumps go componentwise.
"""

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, List, Optional, Sequence

import numpy as np

from src.core.errors import BandError
from src.geometry.band import NarrowBand
from src.grid.grid import ScalarField, VectorField
from src.splice.jumps import JumpSet, required_band_width
from src.splice.traces import extract_jumps
from src.stencil.operators import GRADIENT4, LAPLACIAN9_4, StencilOp, wrap
from src.utils.logger import get_logger

log = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class JumpExtrapolation:
    band: NarrowBand
    q: int
    values: np.ndarray
    mask: np.ndarray
    a1: Optional[np.ndarray] = None
    stage_masks: List[np.ndarray] = dc_field(default_factory=list)

    @property
    def components(self):
        return self.values.shape[: self.values.ndim - self.band.grid.dim]

    def field(self) -> ScalarField | VectorField:
        return wrap(self.band.grid, self.band.centering, self.values, self.mask)

    def __add__(self, other: "JumpExtrapolation") -> "JumpExtrapolation":
        return JumpExtrapolation(
            self.band, min(self.q, other.q), self.values + other.values, self.mask & other.mask
        )

    def scaled(self, c: float) -> "JumpExtrapolation":
        return JumpExtrapolation(self.band, self.q, c * self.values, self.mask, self.a1, self.stage_masks)


def _dot_normal(grad: np.ndarray, normals: np.ndarray) -> np.ndarray:
    """grad has shape (dim, *comp, *grid); normals (dim, *grid)."""
    extra = grad.ndim - normals.ndim
    n = normals.reshape(normals.shape[:1] + (1,) * extra + normals.shape[1:])
    return np.sum(grad * n, axis=0)


def _masked(a: np.ndarray, mask: np.ndarray) -> np.ndarray:
    return np.where(mask, a, 0.0)


def build_extrapolation(
    band: NarrowBand,
    jumps: JumpSet,
    q: int = 3,
    op: Optional[StencilOp] = None,
) -> JumpExtrapolation:
    """Order-q jump extrapolation; with `op` the band is checked against its reach."""
    h = band.h
    dim = band.grid.dim
    # a crossing point lies within s of the interface and reads up to s beyond it
    s = 2.0 * op.width(h) if op is not None else 0.0
    needed = required_band_width(s, q, h)
    rule = "s + 8h" if q == 3 else f"s + 2qh (q={q})"
    if band.width < needed - 1e-12 * h:
        raise BandError(
            f"band half-width {band.width / h:g}h too thin for q={q}: rule b >= {rule} "
            f"requires {needed / h:g}h (s = {s / h:g}h)"
        )
    if jumps.order_available() < q:
        raise BandError(f"q={q} needs jumps g0..g{q}; only {jumps.order_available() + 1} provided")

    phi = band.phi
    normals = band.normals()
    masks = [band.mask & jumps.valid(0)]
    v = _masked(jumps.get(0), masks[0])
    a1 = None

    if q >= 1:
        m1 = GRADIENT4.reads_within(masks[0]) & band.normal_mask & jumps.valid(1)
        a1 = _masked(jumps.get(1) - _dot_normal(GRADIENT4.apply(v, h, dim), normals), m1)
        v = _masked(v + a1 * phi, m1)
        masks.append(m1)
    if q >= 2:
        m2 = LAPLACIAN9_4.reads_within(masks[1]) & jumps.valid(2)
        lap_v = LAPLACIAN9_4.apply(v, h, dim)
        a2 = jumps.get(2) - lap_v + LAPLACIAN9_4.apply(a1, h, dim) * phi
        v = _masked(v + 0.5 * a2 * phi**2, m2)
        masks.append(m2)
    if q >= 3:
        lap_mask = LAPLACIAN9_4.reads_within(masks[2])
        m3 = GRADIENT4.reads_within(lap_mask) & band.normal_mask & jumps.valid(3)
        lap_v = _masked(LAPLACIAN9_4.apply(v, h, dim), lap_mask)
        a3 = jumps.get(3) - _dot_normal(GRADIENT4.apply(lap_v, h, dim), normals)
        v = _masked(v + a3 * phi**3 / 6.0, m3)
        masks.append(m3)

    mask = masks[-1]
    if not mask.any():
        raise BandError(f"order-{q} extrapolation left no valid band points")
    log.debug("build_extrapolation: q=%d band=%d valid=%d", q, band.size, int(mask.sum()))
    return JumpExtrapolation(band, q, v, mask, a1, masks)


def jump_operator_apply(band: NarrowBand, jumps: JumpSet, q: int = 3, op: Optional[StencilOp] = None) -> JumpExtrapolation:
    """The jump operator J_q: jump data on a band -> extrapolation."""
    return build_extrapolation(band, jumps, q, op)


def canonical_extrapolation(
    band: NarrowBand,
    normal_jumps: Sequence[Callable[[np.ndarray], np.ndarray]],
    q: int = 3,
) -> JumpExtrapolation:
    """
    v = sum_i gbar_i phi^i / i!, where gbar_i(x) = g_i(x - phi n/|n|) is the constant
    normal extension of the i-th normal-derivative jump g_i.
    """
    if len(normal_jumps) < q + 1:
        raise BandError(f"canonical extrapolation of order {q} needs {q + 1} normal-derivative jumps")
    mask = band.mask & band.normal_mask
    cps = band.closest_points(mask)
    phi = band.phi[mask]
    total = None
    for i in range(q + 1):
        term = np.asarray(normal_jumps[i](cps), dtype=float)
        term = term * (phi ** i / math.factorial(i)).reshape((-1,) + (1,) * (term.ndim - 1))
        total = term if total is None else total + term
    comp = total.shape[1:]
    values = np.zeros(comp + mask.shape)
    if comp:
        values[(slice(None),) * len(comp) + (mask,)] = np.moveaxis(total, 0, -1)
    else:
        values[mask] = total
    return JumpExtrapolation(band, q, values, mask)


def jumps_of_extrapolation(v: JumpExtrapolation, band: Optional[NarrowBand] = None) -> JumpSet:
    """
    Jump data of v H(phi), read back from the spliced field by one-sided traces:
    g0 and g1 at the closest points, extended along normals. Scalar v only.
    """
    band = band or v.band
    if v.components:
        raise BandError("one-sided jump extraction takes scalar extrapolations; split vector ones by component")
    H = band.heaviside()
    spliced = ScalarField(band.grid, band.centering, v.values * H, v.mask | (H == 0.0))
    return extract_jumps(spliced, band)


__all__ = [
    "JumpExtrapolation",
    "build_extrapolation",
    "jump_operator_apply",
    "canonical_extrapolation",
    "jumps_of_extrapolation",
]
