# src/grid/norms.py
from __future__ import annotations

"""Norms and inter-grid comparison
---------------------------------
Grid norms over a region mask and the between-grid comparison used by the
convergence metrics. Cell fields are compared through the average of the 2^d
fine cells sharing a coarse cell center (second-order interpolation); node
fields compare at shared nodes.
"""

from typing import Optional, Sequence

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from src.core.errors import GridError
from src.grid.grid import Centering, ScalarField


def _region(field: ScalarField, region_mask: Optional[np.ndarray]) -> np.ndarray:
    mask = field.valid() if region_mask is None else np.asarray(region_mask, dtype=bool)
    if field.mask is not None and region_mask is not None:
        mask = mask & field.mask
    if not mask.any():
        raise GridError("norm over an empty mask")
    values = field.data[mask]
    if not np.all(np.isfinite(values)):
        raise GridError("field is not finite on the norm region")
    return values


def linf_norm(field: ScalarField, region_mask: Optional[np.ndarray] = None) -> float:
    return float(np.max(np.abs(_region(field, region_mask))))


def l2_norm(field: ScalarField, region_mask: Optional[np.ndarray] = None) -> float:
    """sqrt(h^d * sum v^2) over the region."""
    values = _region(field, region_mask)
    return float(np.sqrt(field.grid.h ** field.grid.dim * np.sum(values * values)))


def coarse_view(fine: np.ndarray, centering: Centering) -> np.ndarray:
    """Fine array sampled at coarse points (shared nodes or 2^d cell average)."""
    dim = fine.ndim
    if Centering(centering) == Centering.node:
        return fine[(slice(None, None, 2),) * dim]
    nc = fine.shape[0] // 2
    blocks = fine.reshape(sum(((nc, 2) for _ in range(dim)), ()))
    return blocks.mean(axis=tuple(range(1, 2 * dim, 2)))


def coarse_mask(fine_mask: np.ndarray, centering: Centering) -> np.ndarray:
    """Coarse points whose fine support lies entirely inside fine_mask."""
    dim = fine_mask.ndim
    if Centering(centering) == Centering.node:
        return fine_mask[(slice(None, None, 2),) * dim]
    nc = fine_mask.shape[0] // 2
    blocks = fine_mask.reshape(sum(((nc, 2) for _ in range(dim)), ()))
    return blocks.all(axis=tuple(range(1, 2 * dim, 2)))


def restrict_compare(
    fine: ScalarField,
    coarse: ScalarField,
    exclusion_mask: Optional[np.ndarray] = None,
) -> float:
    """max |fine_interp - coarse| over coarse points not excluded."""
    if fine.centering != coarse.centering:
        raise GridError(f"centering mismatch: {fine.centering.value} vs {coarse.centering.value}")
    if fine.grid.n != 2 * coarse.grid.n or not fine.grid.same_domain(coarse.grid):
        raise GridError(f"fine n={fine.grid.n} is not a refinement of coarse n={coarse.grid.n}")

    include = coarse.valid().copy()
    if fine.mask is not None:
        include &= coarse_mask(fine.mask, fine.centering)
    if exclusion_mask is not None:
        include &= ~np.asarray(exclusion_mask, dtype=bool)
    if not include.any():
        raise GridError("no coarse points left to compare")

    diff = coarse_view(fine.data, fine.centering) - coarse.data
    return float(np.max(np.abs(diff[include])))


def interpolate_to(field: ScalarField, points: np.ndarray, method: str = "linear") -> np.ndarray:
    """Sample a field at arbitrary (N, dim) points; outside the grid extrapolates."""
    axes: Sequence[np.ndarray] = [field.grid.axis_coords(a, field.centering) for a in range(field.grid.dim)]
    interp = RegularGridInterpolator(axes, field.data, method=method, bounds_error=False, fill_value=None)
    return interp(np.atleast_2d(points))


__all__ = [
    "linf_norm",
    "l2_norm",
    "restrict_compare",
    "coarse_view",
    "coarse_mask",
    "interpolate_to",
]
