import math

import numpy as np
import pytest

from src.core.errors import BandError
from src.geometry.band import band_from_sdf, band_from_shape
from src.geometry.shapes import Circle, Ellipse
from src.grid.grid import Centering, make_grid
from src.quadrature.integrate import (
    SurfaceIntegrand,
    delta_field,
    enclosed_volume,
    integrate_surface,
    surface_area,
)


def _band(shape, n=64):
    grid = make_grid(2, n, -1.0, 1.0)
    return band_from_shape(shape, grid, Centering.node, 14 * grid.h)


def test_circle_perimeter_at_n64():
    band = _band(Circle(radius=0.5))
    assert abs(surface_area(band) - math.pi) <= 2.0 * 5.422e-5


def test_perimeter_converges_fast():
    e64 = abs(surface_area(_band(Circle(radius=0.5), 64)) - math.pi)
    e128 = abs(surface_area(_band(Circle(radius=0.5), 128)) - math.pi)
    assert math.log2(e64 / e128) > 3.0


def test_enclosed_area_of_ellipse():
    shape = Ellipse(radii=(0.35, 0.7))
    band = _band(shape)
    area = enclosed_volume(band)
    assert area == pytest.approx(shape.volume(), abs=1e-3)
    assert enclosed_volume(band, axis=1) == pytest.approx(area, abs=1e-3)
    with pytest.raises(ValueError):
        enclosed_volume(band, axis=2)


def test_delta_is_supported_near_interface():
    band = _band(Circle(radius=0.5))
    delta = delta_field(SurfaceIntegrand.constant(band), band)
    support = delta != 0.0
    assert support.any()
    assert np.abs(band.phi[support]).max() <= 3.0 * band.h


def test_integrand_scales_linearly():
    band = _band(Circle(radius=0.5))
    one = integrate_surface(SurfaceIntegrand.constant(band), band)
    three = integrate_surface(SurfaceIntegrand.constant(band, 3.0), band)
    assert three == pytest.approx(3.0 * one, rel=1e-12)


def test_empty_band_integrates_to_zero():
    grid = make_grid(2, 16, -1.0, 1.0)
    # interface outside the box: no band points
    band = band_from_sdf(grid, Centering.node, np.full(grid.shape(Centering.node), 5.0), 4 * grid.h)
    assert integrate_surface(SurfaceIntegrand.constant(band), band) == 0.0


def test_quadrature_needs_wide_band():
    grid = make_grid(2, 64, -1.0, 1.0)
    band = band_from_shape(Circle(radius=0.5), grid, Centering.node, 10 * grid.h)
    with pytest.raises(BandError):
        surface_area(band)
