# src/splice/jumps.py
from __future__ import annotations

"""Jump data
-----------
A JumpSet holds the four interface quantities that drive the extrapolation,
extended to dense grid arrays:

  g0      [u]                         valid on |phi| < b
  g1      [grad u] . n                valid on |phi| < b - 2h
  g_lap   [lap u]                     valid on |phi| < b - 4h
  g_dnlap [grad lap u] . n            valid on |phi| < b - 8h

Arrays are shaped (*components, *grid); scalar jumps have no component axes.
The jump of u is the inside value (phi >= 0) minus the outside value.
"""

from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from src.core.errors import BandError
from src.geometry.band import NarrowBand

JumpFn = Callable[[np.ndarray, np.ndarray], np.ndarray]

NAMES: Tuple[str, ...] = ("g0", "g1", "g_lap", "g_dnlap")
# shrink of the band (in units of h) on which each jump must be valid
SHRINK: Tuple[int, ...] = (0, 2, 4, 8)


def required_band_width(op_width: float, q: int, h: float) -> float:
    """Minimum band half-width for an order-q extrapolation feeding an operator of reach op_width."""
    if not 0 <= q <= 3:
        raise ValueError(f"extrapolation order q must be in 0..3, got {q}")
    return op_width + (8.0 * h if q == 3 else 2.0 * q * h)


@dataclass(frozen=True, eq=False)
class JumpSet:
    band: NarrowBand
    g0: np.ndarray
    g1: Optional[np.ndarray] = None
    g_lap: Optional[np.ndarray] = None
    g_dnlap: Optional[np.ndarray] = None
    # optional per-jump validity masks; None means the nominal shrunken band
    masks: Optional[Tuple[Optional[np.ndarray], ...]] = None

    def __post_init__(self) -> None:
        grid_shape = self.band.phi.shape
        for name in NAMES:
            a = getattr(self, name)
            if a is None:
                continue
            if tuple(a.shape[-len(grid_shape):]) != grid_shape or a.shape != self.g0.shape:
                raise BandError(f"jump {name} has shape {a.shape}, expected {self.g0.shape}")

    # ---- accessors ----

    @property
    def components(self) -> Tuple[int, ...]:
        return tuple(self.g0.shape[: self.g0.ndim - self.band.grid.dim])

    def get(self, i: int) -> np.ndarray:
        a = getattr(self, NAMES[i])
        if a is None:
            raise BandError(f"jump {NAMES[i]} is required but was not provided")
        return a

    def valid(self, i: int) -> np.ndarray:
        nominal = self.band.shrink(SHRINK[i] * self.band.h)
        if self.masks is not None and i < len(self.masks) and self.masks[i] is not None:
            return nominal & self.masks[i]
        return nominal

    def order_available(self) -> int:
        q = -1
        for name in NAMES:
            if getattr(self, name) is None:
                break
            q += 1
        return q

    # ---- linearity ----

    @classmethod
    def zeros(cls, band: NarrowBand, components: Sequence[int] = ()) -> "JumpSet":
        shape = tuple(components) + band.phi.shape
        return cls(band, *(np.zeros(shape) for _ in NAMES))

    def scaled(self, c: float) -> "JumpSet":
        return replace(self, **{n: None if getattr(self, n) is None else c * getattr(self, n) for n in NAMES})

    def __add__(self, other: "JumpSet") -> "JumpSet":
        if other.band is not self.band and not np.array_equal(other.band.phi, self.band.phi):
            raise BandError("cannot add jump sets defined on different bands")
        values = {}
        for n in NAMES:
            a, b = getattr(self, n), getattr(other, n)
            values[n] = None if a is None or b is None else a + b
        masks = None
        if self.masks is not None or other.masks is not None:
            masks = tuple(_and_masks(self._mask(i), other._mask(i)) for i in range(len(NAMES)))
        return replace(self, masks=masks, **values)

    def _mask(self, i: int) -> Optional[np.ndarray]:
        if self.masks is None or i >= len(self.masks):
            return None
        return self.masks[i]

    # ---- sampling ----

    @classmethod
    def from_functions(
        cls,
        band: NarrowBand,
        g0: JumpFn,
        g1: Optional[JumpFn] = None,
        g_lap: Optional[JumpFn] = None,
        g_dnlap: Optional[JumpFn] = None,
    ) -> "JumpSet":
        """
        Sample analytic jumps on the band. Each callable gets (points, normals),
        both (N, dim), with normals the discrete n = grad4(phi) (unnormalized).
        """
        normals = band.normals()
        fns = (g0, g1, g_lap, g_dnlap)
        values = {}
        for i, (name, fn) in enumerate(zip(NAMES, fns)):
            if fn is None:
                values[name] = None
                continue
            mask = band.shrink(SHRINK[i] * band.h) if i == 0 else band.shrink(SHRINK[i] * band.h) & band.normal_mask
            pts = band.grid.points(band.centering, mask)
            nrm = np.stack([c[mask] for c in normals], axis=-1)
            vals = np.asarray(fn(pts, nrm), dtype=float)
            values[name] = _scatter(vals, mask)
        shapes = {v.shape for v in values.values() if v is not None}
        if len(shapes) > 1:
            raise BandError(f"jump functions disagree on component shape: {sorted(shapes)}")
        return cls(band, **values)


def _scatter(vals: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """(N, *comp) samples on mask -> dense (*comp, *grid) array, zero off mask."""
    comp = vals.shape[1:]
    out = np.zeros(comp + mask.shape)
    if comp:
        out[(slice(None),) * len(comp) + (mask,)] = np.moveaxis(vals, 0, -1)
    else:
        out[mask] = vals
    return out


def _and_masks(a: Optional[np.ndarray], b: Optional[np.ndarray]) -> Optional[np.ndarray]:
    if a is None:
        return b
    if b is None:
        return a
    return a & b


__all__ = ["JumpSet", "JumpFn", "required_band_width", "NAMES", "SHRINK"]
