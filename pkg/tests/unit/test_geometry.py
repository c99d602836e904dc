import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.core.errors import BandError, GeometryError
from src.geometry.band import band_from_shape
from src.geometry.curvature import clamp_curvature, curvature, ellipse_curvature
from src.geometry.reconstruct import reconstruct_sdf
from src.geometry.shapes import Circle, Ellipse, Ellipsoid, FieldShape, Stadium, TwoCircles, shape_from_config
from src.grid.grid import Centering, ScalarField, make_grid


def test_circle_distance_is_positive_inside(circle):
    d = circle.exact_sdf(np.array([[0.0, 0.1], [0.5, 0.0], [0.0, -0.9]]))
    assert d == pytest.approx([0.4, 0.0, -0.4])


def test_ellipse_distance_along_outward_normal():
    e = Ellipse(radii=(0.7, 0.3))
    for t in (0.3, 1.0, 2.5):
        b = np.array([0.7 * math.cos(t), 0.3 * math.sin(t)])
        n = np.array([math.cos(t) / 0.7, math.sin(t) / 0.3])
        n /= np.linalg.norm(n)
        d = e.exact_sdf(np.stack([b, b + 0.05 * n]))
        assert d == pytest.approx([0.0, -0.05], abs=1e-10)


def test_closed_form_measures():
    assert Circle(radius=0.5).perimeter() == pytest.approx(math.pi)
    assert Circle(center=(0.0, 0.0, 0.0), radius=1.0).volume() == pytest.approx(4.0 * math.pi / 3.0)
    assert Ellipsoid(radii=(0.7, 0.3, 0.5)).volume() == pytest.approx(4.0 / 3.0 * math.pi * 0.105)
    assert Stadium(half_length=0.5, radius=0.2).perimeter() == pytest.approx(2.0 + 0.4 * math.pi)
    two = TwoCircles()
    assert two.volume() < 2.0 * math.pi * 0.25
    assert two.perimeter() < 2.0 * math.pi


def test_two_circles_distance_near_the_corner():
    two = TwoCircles(radius=0.5, offset=0.25)
    yc = math.sqrt(0.25 - 0.0625)
    assert two.exact_sdf(np.array([[0.0, yc - 0.1]]))[0] == pytest.approx(0.1)
    above = np.array([[0.0, yc + 0.1]])
    assert two.exact_sdf(above)[0] == pytest.approx(0.5 - math.hypot(0.25, yc + 0.1))


def test_two_circles_must_overlap():
    with pytest.raises(ValidationError):
        TwoCircles(radius=0.3, offset=0.4)


def test_shape_from_config_uses_kind():
    s = shape_from_config({"kind": "stadium", "half_length": 0.3, "radius": 0.1})
    assert isinstance(s, Stadium)
    assert shape_from_config({"kind": "ellipsoid"}).dim == 3


def test_field_shape_has_no_exact_distance(tmp_path):
    with pytest.raises(GeometryError):
        FieldShape(path=tmp_path / "phi").exact_sdf(np.zeros((1, 2)))


def test_band_clamps_values(circle_band):
    b = circle_band
    assert np.abs(b.phi).max() <= b.width
    assert b.mask.sum() == (np.abs(b.phi) < b.width).sum()
    with pytest.raises(BandError):
        b.restricted(2.0 * b.width)
    assert b.restricted(b.width / 2).size < b.size


def test_band_normals_are_unit_near_interface(circle_band):
    mask = circle_band.normal_mask & circle_band.shrink(4.0 * circle_band.h)
    norms = np.linalg.norm(circle_band.normals()[:, mask], axis=0)
    assert norms == pytest.approx(np.ones(norms.shape), abs=1e-5)


def test_closest_points_lie_on_circle(circle_band):
    cps = circle_band.closest_points(circle_band.shrink(6.0 * circle_band.h))
    assert np.linalg.norm(cps, axis=1) == pytest.approx(np.full(len(cps), 0.5), abs=1e-6)


def test_reconstruct_sdf_of_quadratic_level_set(grid64):
    levelset = ScalarField.sample(grid64, Centering.node, lambda x, y: 0.25 - x**2 - y**2)
    band = reconstruct_sdf(levelset, 6.0 * grid64.h)
    x, y = grid64.coords(Centering.node)
    exact = 0.5 - np.hypot(x, y)
    inner = band.shrink(2.0 * grid64.h)
    assert inner.any()
    assert np.abs(band.phi - exact)[inner].max() < 1e-6
    assert band.stats.fallbacks == 0


def test_reconstruct_sdf_converges_at_fifth_order():
    # non-polynomial level set with the circle r = 1/2 as zero set
    errs = []
    for n in (32, 64, 128):
        grid = make_grid(2, n, -1.0, 1.0)
        levelset = ScalarField.sample(grid, Centering.node, lambda x, y: np.exp(0.25 - x**2 - y**2) - 1.0)
        band = reconstruct_sdf(levelset, 6.0 * grid.h)
        x, y = grid.coords(Centering.node)
        inner = band.shrink(2.0 * grid.h)
        errs.append(np.abs(band.phi - (0.5 - np.hypot(x, y)))[inner].max())
    assert math.log2(errs[0] / errs[2]) / 2.0 >= 4.5


def test_reconstruct_needs_sign_change(grid64):
    levelset = ScalarField.sample(grid64, Centering.node, lambda x, y: 1.0 + x * 0.0)
    with pytest.raises(GeometryError, match="sign change"):
        reconstruct_sdf(levelset, 6.0 * grid64.h)


def test_curvature_of_circle(circle_band):
    kappa = curvature(circle_band)
    x, y = circle_band.grid.coords(Centering.node)
    r = np.hypot(x, y)
    m = kappa.mask & circle_band.shrink(8.0 * circle_band.h)
    assert m.any()
    assert kappa.data[m] == pytest.approx(-1.0 / r[m], abs=1e-3)


def test_curvature_needs_band(grid64, circle):
    thin = band_from_shape(circle, grid64, Centering.node, 3.0 * grid64.h)
    with pytest.raises(BandError, match="curvature"):
        curvature(thin)


def test_clamp_curvature_counts_points(circle_band):
    kappa, count = clamp_curvature(curvature(circle_band), 1.5)
    assert count > 0
    assert np.abs(kappa.data).max() <= 1.5
    _, none = clamp_curvature(kappa, 100.0)
    assert none == 0


def test_ellipse_curvature_reduces_to_circle():
    assert ellipse_curvature(2.0, 2.0, 0.7) == pytest.approx(-0.5)
    assert ellipse_curvature(0.7, 0.3, 0.0) == pytest.approx(-0.7 / 0.09)
