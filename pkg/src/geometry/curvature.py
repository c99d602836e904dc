# src/geometry/curvature.py
from __future__ import annotations

"""Curvature
-----------
kappa = fourth-order Laplacian of the signed distance, on the band shrunk by 2h.
With phi > 0 inside and n = grad(phi) inward, a circle of radius r has kappa = -1/r.
"""

from typing import Tuple

import numpy as np

from src.geometry.band import NarrowBand
from src.grid.grid import ScalarField
from src.stencil.operators import LAPLACIAN9_4
from src.utils.logger import get_logger

log = get_logger(__name__)


def curvature(band: NarrowBand) -> ScalarField:
    h = band.h
    band.require_width(LAPLACIAN9_4.width(h) + 2.0 * h, "curvature")
    mask = LAPLACIAN9_4.reads_within(band.mask) & band.shrink(2.0 * h)
    kappa = LAPLACIAN9_4.apply(band.phi, h, band.grid.dim)
    kappa[~mask] = 0.0
    return ScalarField(band.grid, band.centering, kappa, mask)


def clamp_curvature(kappa: ScalarField, limit: float) -> Tuple[ScalarField, int]:
    """Clip |kappa| to `limit` on the valid points; returns the field and the clamp count."""
    valid = kappa.valid()
    over = valid & (np.abs(kappa.data) > limit)
    count = int(over.sum())
    if count:
        log.debug("curvature clamped at %d points (|kappa| > %.3g)", count, limit)
    return kappa.with_data(np.clip(kappa.data, -limit, limit)), count


def ellipse_curvature(a: float, b: float, t: float) -> float:
    """Signed curvature of x = a cos t, y = b sin t with the inward-normal convention."""
    return -a * b / (a * a * np.sin(t) ** 2 + b * b * np.cos(t) ** 2) ** 1.5


__all__ = ["curvature", "clamp_curvature", "ellipse_curvature"]
