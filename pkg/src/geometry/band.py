# src/geometry/band.py
from __future__ import annotations

"""Narrow bands
--------------
A NarrowBand stores the discretized signed distance on the points with
|phi| < b. Values outside the band are clamped to +/-b so their sign (and
hence H(phi)) stays defined on the whole grid.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from src.core.errors import BandError
from src.grid.grid import Centering, Grid, ScalarField
from src.stencil.operators import GRADIENT4


@dataclass(frozen=True, eq=False)
class NarrowBand:
    grid: Grid
    centering: Centering
    phi: np.ndarray
    width: float
    stats: Optional[object] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "centering", Centering(self.centering))
        expected = self.grid.shape(self.centering)
        if tuple(self.phi.shape) != expected:
            raise BandError(f"band values shape {self.phi.shape} != grid shape {expected}")
        if self.width <= 0:
            raise BandError(f"band half-width must be positive, got {self.width}")

    @property
    def h(self) -> float:
        return self.grid.h

    @cached_property
    def mask(self) -> np.ndarray:
        return np.abs(self.phi) < self.width

    @property
    def size(self) -> int:
        return int(self.mask.sum())

    @property
    def field(self) -> ScalarField:
        return ScalarField(self.grid, self.centering, self.phi, self.mask)

    def shrink(self, delta: float) -> np.ndarray:
        """Mask of the band of half-width b - delta."""
        return np.abs(self.phi) < self.width - delta

    def restricted(self, width: float) -> "NarrowBand":
        if width > self.width:
            raise BandError(f"cannot widen a band from {self.width:g} to {width:g}")
        return NarrowBand(self.grid, self.centering, np.clip(self.phi, -width, width), width, self.stats)

    def heaviside(self) -> np.ndarray:
        return (self.phi >= 0.0).astype(float)

    def require_width(self, needed: float, what: str) -> None:
        if self.width < needed - 1e-12 * self.h:
            raise BandError(
                f"{what} needs band half-width >= {needed / self.h:g}h, got {self.width / self.h:g}h"
            )

    # ---- normals ----

    @cached_property
    def normal_mask(self) -> np.ndarray:
        return GRADIENT4.reads_within(self.mask)

    def normals(self) -> np.ndarray:
        """Unnormalized fourth-order gradient of phi, shape (dim, *grid); zero off normal_mask."""
        return self._normals

    @cached_property
    def _normals(self) -> np.ndarray:
        n = GRADIENT4.apply(self.phi, self.h, self.grid.dim)
        n[:, ~self.normal_mask] = 0.0
        n.setflags(write=False)
        return n

    def closest_points(self, mask: Optional[np.ndarray] = None) -> np.ndarray:
        """x - phi n/|n| at the masked points, as an (N, dim) array."""
        mask = self.normal_mask if mask is None else mask & self.normal_mask
        x = self.grid.points(self.centering, mask)
        n = np.stack([c[mask] for c in self.normals()], axis=-1)
        norm = np.linalg.norm(n, axis=-1, keepdims=True)
        unit = n / np.where(norm > 0.0, norm, 1.0)
        return x - self.phi[mask][:, None] * unit


def band_from_sdf(grid: Grid, centering: Centering, sdf_values: np.ndarray, width: float) -> NarrowBand:
    """Band from exact distances; values beyond the band are clamped to +/-width."""
    phi = np.clip(np.asarray(sdf_values, dtype=float), -width, width)
    return NarrowBand(grid, Centering(centering), phi, float(width))


def band_from_shape(shape, grid: Grid, centering: Centering, width: float) -> NarrowBand:
    return band_from_sdf(grid, centering, shape.sample(grid, centering, exact=True), width)


__all__ = ["NarrowBand", "band_from_sdf", "band_from_shape"]
