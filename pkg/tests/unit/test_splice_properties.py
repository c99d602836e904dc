import math

import numpy as np
import pytest

from src.geometry.band import band_from_shape
from src.geometry.shapes import Circle
from src.grid.grid import Centering, ScalarField, make_grid
from src.splice.extrapolation import (
    JumpExtrapolation,
    build_extrapolation,
    canonical_extrapolation,
    jumps_of_extrapolation,
)
from src.splice.jumps import JumpSet
from src.splice.operators import one_sided_jump, spliced_apply, spliced_time_derivative
from src.splice.traces import one_sided_normal_traces
from src.stencil.operators import LAPLACIAN5

# w = exp(a . x) has lap w = |a|^2 w = w and d_n^i w = (a . n)^i w
A = np.array([0.6, -0.8])


def _w(p):
    return np.exp(p @ A)


def _unit(n):
    norm = np.linalg.norm(n, axis=1, keepdims=True)
    return n / np.where(norm > 0.0, norm, 1.0)


def _band(n, cells, center=(0.0, 0.0)):
    grid = make_grid(2, n, -1.0, 1.0)
    return band_from_shape(Circle(center=center, radius=0.5), grid, Centering.node, cells * grid.h)


def _exp_jumps(band):
    return JumpSet.from_functions(
        band,
        lambda p, n: _w(p),
        lambda p, n: (_unit(n) @ A) * _w(p),
        lambda p, n: _w(p),
        lambda p, n: (_unit(n) @ A) * _w(p),
    )


def _normal_derivative(i):
    # inward normal of a circle centred at the origin
    return lambda p: (_unit(-p) @ A) ** i * _w(p)


def _rate(coarse, fine):
    return math.log2(coarse / fine)


def test_one_sided_jump_of_curved_field_is_high_order():
    errs = []
    for n in (32, 64, 128):
        band = _band(n, 12)
        x, y = band.grid.coords(Centering.node)
        w = np.exp(x) * np.sin(2.0 * y)
        field = ScalarField(band.grid, Centering.node, np.cos(x + y) + w * band.heaviside())
        cps, jump = one_sided_jump(field, band)
        assert len(cps) > 0
        exact = np.exp(cps[:, 0]) * np.sin(2.0 * cps[:, 1])
        errs.append(np.abs(jump - exact).max())
    assert errs[-1] < 1e-4
    assert _rate(errs[0], errs[2]) / 2.0 >= 3.5


def test_one_sided_jump_skips_points_without_one_sided_window():
    # interface one cell from the wall: no outside window fits there
    grid = make_grid(2, 32, -1.0, 1.0)
    band = band_from_shape(Circle(center=(0.45, 0.0), radius=0.5), grid, Centering.node, 12 * grid.h)
    x, _ = grid.coords(Centering.node)
    field = ScalarField(grid, Centering.node, x + 2.0 * band.heaviside())
    cps, jump = one_sided_jump(field, band)
    near = (np.abs(band.phi) < band.h) & band.normal_mask
    assert 0 < len(cps) < int(near.sum())
    assert jump == pytest.approx(np.full(len(jump), 2.0), abs=1e-8)


def test_jumps_of_spliced_extrapolation_rebuild_it():
    errs = []
    for n in (128, 256):
        band = _band(n, 24)
        h = band.h
        v = build_extrapolation(band, _exp_jumps(band), q=3)
        again = build_extrapolation(band, jumps_of_extrapolation(v), q=1)
        m = again.mask & v.mask & (np.abs(band.phi) < 2.0 * h)
        assert m.any()
        errs.append(np.abs(again.values - v.values)[m].max())
    # order-1 rebuild agrees to O(h^2)
    assert errs[0] < 1e-2
    assert _rate(errs[0], errs[1]) >= 1.5


def test_bootstrapped_and_canonical_extrapolations_agree_to_order_q_plus_one():
    ratios = []
    for n in (64, 128):
        band = _band(n, 12)
        h = band.h
        v = build_extrapolation(band, _exp_jumps(band), q=3)
        canon = canonical_extrapolation(band, [_normal_derivative(i) for i in range(4)], q=3)
        m = v.mask & canon.mask
        assert m.any()
        scale = (np.abs(band.phi[m]) + h) ** 4
        ratios.append(np.max(np.abs(v.values[m] - canon.values[m]) / scale))
    assert 0.25 <= ratios[1] / ratios[0] <= 4.0


def test_perturbed_extrapolation_moves_spliced_laplacian_by_h_q_minus_one():
    eps = 0.5
    rng = np.random.default_rng(7)
    for n in (64, 128):
        band = _band(n, 12)
        h = band.h
        x, y = band.grid.coords(Centering.node)
        H = band.heaviside()
        u = np.cos(x) + np.exp(0.6 * x - 0.8 * y) * H
        v = build_extrapolation(band, _exp_jumps(band), q=3, op=LAPLACIAN5)
        noise = rng.uniform(-1.0, 1.0, v.values.shape)
        bumped = JumpExtrapolation(band, v.q, np.where(v.mask, v.values + eps * h**4 * noise, 0.0), v.mask)

        diff = np.abs(spliced_apply(LAPLACIAN5, u, bumped) - spliced_apply(LAPLACIAN5, u, v))
        crossing = LAPLACIAN5.crossing(H, H)
        # |lap5| <= 8/h^2 on each of the two perturbed terms
        assert diff.max() <= 16.0 * eps * h**2 + 1e-9
        assert diff[crossing].max() > 0.0
        assert not diff[~crossing].any()


@pytest.mark.parametrize("inside", [True, False])
def test_one_sided_normal_derivatives_of_extrapolation_match_jumps(inside):
    errs = {0: [], 1: []}
    for n in (128, 256):
        band = _band(n, 24)
        v = build_extrapolation(band, _exp_jumps(band), q=3)
        field = ScalarField(band.grid, Centering.node, v.values, v.mask)
        cps, trace = one_sided_normal_traces(field, band, inside=inside, within=1.0)
        ok = trace.ok
        assert ok.any()
        p = cps[ok]
        errs[0].append(np.abs(trace.value[ok] - _w(p)).max())
        errs[1].append(np.abs(trace.dn[ok] - _normal_derivative(1)(p)).max())
    for i, (coarse, fine) in errs.items():
        # O(h^(q - i)) with q = 3, or already at round-off
        assert fine <= max(coarse / 2.0 ** (3 - i - 0.5), 1e-10)


def test_time_derivative_of_translating_circle():
    grid = make_grid(2, 64, -1.0, 1.0)
    t = 0.3
    for dt in (0.5 * grid.h, 0.25 * grid.h):
        band_n = band_from_shape(Circle(center=(0.0, 0.0), radius=0.5), grid, Centering.node, 12 * grid.h)
        band_np1 = band_from_shape(Circle(center=(dt, 0.0), radius=0.5), grid, Centering.node, 12 * grid.h)
        x, y = grid.coords(Centering.node)
        jump = np.exp(x) * np.sin(y) + 3.0

        def u(time, band):
            return np.sin(x) + 0.5 * time**2 + jump * band.heaviside()

        jumps = JumpSet.from_functions(
            band_np1,
            lambda p, n: np.exp(p[:, 0]) * np.sin(p[:, 1]) + 3.0,
            lambda p, n: np.exp(p[:, 0]) * (np.sin(p[:, 1]) * _unit(n)[:, 0] + np.cos(p[:, 1]) * _unit(n)[:, 1]),
            lambda p, n: np.zeros(len(p)),
            lambda p, n: np.zeros(len(p)),
        )
        v = build_extrapolation(band_np1, jumps, q=3)
        u_n, u_np1 = u(t, band_n), u(t + dt, band_np1)
        spliced = spliced_time_derivative(u_n, u_np1, v, band_n, band_np1, dt)
        plain = (u_np1 - u_n) / dt

        flipped = band_np1.heaviside() != band_n.heaviside()
        assert flipped.any()
        # both sides change at d/dt = t
        assert np.abs(spliced - t)[flipped].max() <= 2.0 * dt
        assert np.abs(plain - t)[flipped].min() >= 1.0 / dt
