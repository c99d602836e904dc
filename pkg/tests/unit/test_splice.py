import numpy as np
import pytest

from src.core.errors import BandError, OrderError
from src.geometry.band import band_from_shape
from src.grid.grid import Centering, ScalarField
from src.splice.extrapolation import (
    build_extrapolation,
    canonical_extrapolation,
    jump_operator_apply,
    jumps_of_extrapolation,
)
from src.splice.jumps import JumpSet, required_band_width
from src.splice.operators import (
    inner_splice,
    one_sided_jump,
    outer_splice,
    splice_correction,
    spliced_apply,
    spliced_time_derivative,
)
from src.stencil.operators import LAPLACIAN5, LAPLACIAN9_4


def _smooth_jumps(band):
    """Jump data of w = exp(x) sin(y) + x^2 with the discrete normals."""
    def g0(p, n):
        return np.exp(p[:, 0]) * np.sin(p[:, 1]) + p[:, 0] ** 2

    def g1(p, n):
        gx = np.exp(p[:, 0]) * np.sin(p[:, 1]) + 2.0 * p[:, 0]
        gy = np.exp(p[:, 0]) * np.cos(p[:, 1])
        return gx * n[:, 0] + gy * n[:, 1]

    return JumpSet.from_functions(
        band,
        g0,
        g1,
        lambda p, n: np.full(len(p), 2.0),
        lambda p, n: np.zeros(len(p)),
    )


def test_required_band_width():
    h = 0.1
    assert required_band_width(2 * h, 3, h) == pytest.approx(10 * h)
    assert required_band_width(2 * h, 1, h) == pytest.approx(4 * h)
    with pytest.raises(ValueError):
        required_band_width(0.0, 4, h)


def test_zero_jumps_leave_stencil_untouched(circle_band):
    u = np.cos(np.sum(circle_band.grid.coords(Centering.node), axis=0))
    v = build_extrapolation(circle_band, JumpSet.zeros(circle_band), q=3, op=LAPLACIAN5)
    out = spliced_apply(LAPLACIAN5, u, v)
    assert np.array_equal(out, LAPLACIAN5.apply(u, circle_band.h, 2))
    assert not splice_correction(LAPLACIAN5, v).any()


def test_non_crossing_points_are_bitwise_raw(circle_band):
    h = circle_band.h
    u = np.exp(circle_band.grid.coords(Centering.node)[0])
    v = build_extrapolation(circle_band, _smooth_jumps(circle_band), q=3, op=LAPLACIAN5)
    out = spliced_apply(LAPLACIAN5, u, v)
    H = circle_band.heaviside()
    crossing = LAPLACIAN5.crossing(H, H)
    assert crossing.any()
    raw = LAPLACIAN5.apply(u, h, 2)
    assert np.array_equal(out[~crossing], raw[~crossing])


def test_jump_operator_is_linear(circle_band):
    a = _smooth_jumps(circle_band)
    b = JumpSet.from_functions(
        circle_band,
        lambda p, n: p[:, 1],
        lambda p, n: n[:, 1],
        lambda p, n: np.zeros(len(p)),
        lambda p, n: np.zeros(len(p)),
    )
    va = jump_operator_apply(circle_band, a)
    vb = jump_operator_apply(circle_band, b)
    vab = jump_operator_apply(circle_band, a.scaled(2.0) + b.scaled(-3.0))
    assert np.array_equal(va.values, build_extrapolation(circle_band, a).values, equal_nan=True)
    m = vab.mask
    assert np.allclose(vab.values[m], 2.0 * va.values[m] - 3.0 * vb.values[m], rtol=1e-10, atol=1e-10)


def test_extrapolation_recovers_smooth_jump(circle_band):
    v = build_extrapolation(circle_band, _smooth_jumps(circle_band))
    x, y = circle_band.grid.coords(Centering.node)
    w = np.exp(x) * np.sin(y) + x**2
    assert np.abs(v.values - w)[v.mask].max() < 1e-4


def test_thin_band_is_rejected(grid64, circle):
    thin = band_from_shape(circle, grid64, Centering.node, 6 * grid64.h)
    with pytest.raises(BandError, match="too thin"):
        build_extrapolation(thin, JumpSet.zeros(thin), q=3, op=LAPLACIAN5)


def test_missing_jump_orders_are_rejected(circle_band):
    jumps = JumpSet(circle_band, np.zeros(circle_band.phi.shape))
    with pytest.raises(BandError, match="needs jumps"):
        build_extrapolation(circle_band, jumps, q=1)


def test_low_order_extrapolation_raises_order_error(circle_band):
    v = build_extrapolation(circle_band, _smooth_jumps(circle_band), q=2, op=LAPLACIAN5)
    with pytest.raises(OrderError):
        spliced_apply(LAPLACIAN5, np.zeros(circle_band.phi.shape), v)
    # non-strict callers accept the lower order
    spliced_apply(LAPLACIAN5, np.zeros(circle_band.phi.shape), v, strict=False)


def test_wide_operator_needs_wider_band(circle_band):
    v = build_extrapolation(circle_band, JumpSet.zeros(circle_band), q=3, op=LAPLACIAN5)
    narrow = type(v)(v.band, v.q, v.values, v.band.shrink(11 * circle_band.h))
    with pytest.raises(BandError, match="outside its band"):
        spliced_apply(LAPLACIAN9_4, np.zeros(v.values.shape), narrow, strict=False)


def test_spliced_laplacian_of_piecewise_function(circle_band):
    x, y = circle_band.grid.coords(Centering.node)
    w = np.exp(x) * np.sin(y) + x**2
    H = circle_band.heaviside()
    u = np.cos(x) + w * H
    v = build_extrapolation(circle_band, _smooth_jumps(circle_band), op=LAPLACIAN5)
    out = spliced_apply(LAPLACIAN5, u, v)
    exact = -np.cos(x) + 2.0 * H
    inner = (slice(1, -1), slice(1, -1))
    assert np.abs(out - exact)[inner].max() < 5e-3


def test_inner_and_outer_splice():
    H = np.array([0.0, 1.0, 1.0])
    outside = np.array([1.0, 2.0, 3.0])
    w = np.array([10.0, 20.0, 30.0])
    u = outside + w * H
    assert inner_splice(u, w, H) == pytest.approx(outside + w)
    assert outer_splice(u, w, H) == pytest.approx(outside)


def test_time_derivative_without_motion(circle_band):
    v = build_extrapolation(circle_band, JumpSet.zeros(circle_band))
    a = np.zeros(circle_band.phi.shape)
    out = spliced_time_derivative(a, a + 2.0, v, circle_band, circle_band, 0.5)
    assert np.all(out == 4.0)


def test_time_derivative_removes_jump_of_moving_interface(grid64, circle):
    band_n = band_from_shape(circle, grid64, Centering.node, 12 * grid64.h)
    moved = circle.model_copy(update={"radius": 0.5 + 0.5 * grid64.h})
    band_np1 = band_from_shape(moved, grid64, Centering.node, 12 * grid64.h)
    ones = JumpSet.from_functions(
        band_np1,
        lambda p, n: np.ones(len(p)),
        lambda p, n: np.zeros(len(p)),
        lambda p, n: np.zeros(len(p)),
        lambda p, n: np.zeros(len(p)),
    )
    v = build_extrapolation(band_np1, ones)
    u_n = band_n.heaviside()
    u_np1 = band_np1.heaviside()
    out = spliced_time_derivative(u_n, u_np1, v, band_n, band_np1, 1.0)
    flipped = u_np1 != u_n
    assert flipped.any()
    assert np.abs(out[flipped]).max() < 1e-12


def test_canonical_extrapolation_of_constant_jump(circle_band):
    v = canonical_extrapolation(
        circle_band, [lambda p: np.full(len(p), 2.0)] + [lambda p: np.zeros(len(p))] * 3
    )
    assert v.values[v.mask] == pytest.approx(np.full(int(v.mask.sum()), 2.0))
    with pytest.raises(BandError):
        canonical_extrapolation(circle_band, [lambda p: p[:, 0]], q=3)


def test_one_sided_jump_measures_discontinuity(circle_band):
    x, _ = circle_band.grid.coords(Centering.node)
    field = ScalarField(circle_band.grid, Centering.node, x + 3.0 * circle_band.heaviside())
    cps, jump = one_sided_jump(field, circle_band)
    assert len(cps) == len(jump) > 0
    assert jump == pytest.approx(np.full(len(jump), 3.0), abs=1e-8)


def test_one_sided_jump_on_band_thinner_than_normal_stencil(grid64, circle):
    # on a 2h band, |phi| < h points facing an axis have no fourth-order normal
    thin = band_from_shape(circle, grid64, Centering.node, 2.0 * grid64.h)
    near = np.abs(thin.phi) < thin.h
    assert (near & ~thin.normal_mask).any()
    x, _ = grid64.coords(Centering.node)
    field = ScalarField(grid64, Centering.node, x + 2.0 * thin.heaviside())
    cps, jump = one_sided_jump(field, thin)
    assert len(cps) == len(jump) <= int((near & thin.normal_mask).sum())
    assert jump == pytest.approx(np.full(len(jump), 2.0), abs=1e-8)


def test_jumps_of_extrapolation_takes_scalars_only(circle_band):
    v = build_extrapolation(circle_band, JumpSet.zeros(circle_band, components=(2,)), q=1)
    with pytest.raises(BandError, match="scalar"):
        jumps_of_extrapolation(v)
