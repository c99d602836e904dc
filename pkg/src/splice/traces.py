# src/splice/traces.py
from __future__ import annotations

"""One-sided traces
------------------
Reads a piecewise-smooth field at the interface from one side only. For a band
point x with closest point y and unit normal n (pointing inside), each side is
sampled at y +/- k h n for k = 2..6 with a local quartic interpolant whose
5^d window lies wholly on that side, and the five samples are extrapolated
back to the interface (value and normal derivative).

Sample windows that would straddle the interface, leave the grid or read an
invalid value of the field are rejected; the affected points are reported as
invalid instead of carrying a low-order value.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.core.errors import BandError
from src.geometry.band import NarrowBand
from src.geometry.reconstruct import QuarticInterpolant
from src.grid.grid import ScalarField
from src.splice.jumps import JumpSet, _scatter
from src.stencil.kernels import fd_weights

_OFFSETS: Tuple[int, ...] = (2, 3, 4, 5, 6)
# shifts of the window toward the sampled side, tried in order
_SHIFTS: Tuple[int, ...] = (0, 1, 2)


@dataclass(frozen=True, eq=False)
class SideTrace:
    """Value and normal derivative (along the inside normal) at the closest points."""

    value: np.ndarray
    dn: np.ndarray
    ok: np.ndarray


def _windows(interp: QuarticInterpolant, points: np.ndarray, direction: np.ndarray, allowed: np.ndarray):
    """Window base per point, shifted toward `direction` until all 5^d values are allowed."""
    s = (points - interp.x0) / interp.h
    centered = np.rint(s).astype(np.intp) - 2
    step = np.where(direction > 0.0, 1, np.where(direction < 0.0, -1, 0)).astype(np.intp)
    base = np.zeros_like(centered)
    ok = np.zeros(len(points), dtype=bool)
    ar = np.arange(5)
    d = interp.dim
    for shift in _SHIFTS:
        todo = ~ok
        if not todo.any():
            break
        cand = centered[todo] + shift * step[todo]
        inside_grid = np.all((cand >= 0) & (cand <= interp.m - 5), axis=1)
        clipped = np.clip(cand, 0, interp.m - 5)
        index = []
        for a in range(d):
            shape = [len(cand)] + [1] * d
            shape[1 + a] = 5
            index.append((clipped[:, a][:, None] + ar[None, :]).reshape(shape))
        good = inside_grid & allowed[tuple(index)].reshape(len(cand), 5**d).all(axis=1)
        idx = np.flatnonzero(todo)[good]
        base[idx] = cand[good]
        ok[idx] = True
    return base, ok


def side_trace(
    field: ScalarField,
    band: NarrowBand,
    cps: np.ndarray,
    normals: np.ndarray,
    inside: bool,
) -> SideTrace:
    """One-sided value and d/dn of `field` at closest points `cps` with unit normals."""
    if field.grid is not band.grid and (field.grid.n != band.grid.n or not field.grid.same_domain(band.grid)):
        raise BandError("field and band live on different grids")
    if field.centering != band.centering:
        raise BandError(f"field is {field.centering.value}-centered, band is {band.centering.value}-centered")
    interp = QuarticInterpolant(field)
    H = band.heaviside() >= 0.5
    allowed = field.valid() & (H if inside else ~H)
    sign = 1.0 if inside else -1.0
    h = band.h

    w0 = fd_weights(_OFFSETS, 0)
    w1 = fd_weights(_OFFSETS, 1)
    value = np.zeros(len(cps))
    dn = np.zeros(len(cps))
    ok = np.ones(len(cps), dtype=bool)
    for k, a, b in zip(_OFFSETS, w0, w1):
        pts = cps + sign * k * h * normals
        base, good = _windows(interp, pts, sign * normals, allowed)
        sample, _, _ = interp.evaluate(pts, base)
        ok &= good
        value += a * sample
        dn += b * sample
    # offsets run along sign*n
    dn *= sign / h
    return SideTrace(np.where(ok, value, np.nan), np.where(ok, dn, np.nan), ok)


def _closest(band: NarrowBand, mask: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    # one mask for closest points and normals
    mask = mask & band.normal_mask & (np.linalg.norm(band.normals(), axis=0) > 0.0)
    cps = band.closest_points(mask)
    n = np.stack([c[mask] for c in band.normals()], axis=-1)
    n = n / np.linalg.norm(n, axis=-1, keepdims=True)
    return mask, cps, n


def one_sided_jump(field: ScalarField, band: NarrowBand, within: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    """
    Measure [w] = w_inside - w_outside at the closest points of band points with
    |phi| < within*h. Returns (closest points, jump values) for the points whose
    samples are one-sided on both sides.
    """
    mask, cps, n = _closest(band, np.abs(band.phi) < within * band.h)
    ins = side_trace(field, band, cps, n, inside=True)
    out = side_trace(field, band, cps, n, inside=False)
    ok = ins.ok & out.ok
    return cps[ok], (ins.value - out.value)[ok]


def one_sided_normal_traces(
    field: ScalarField,
    band: NarrowBand,
    inside: bool = True,
    within: Optional[float] = None,
) -> Tuple[np.ndarray, SideTrace]:
    """Closest points and the one-sided trace of `field` for band points with |phi| < within*h."""
    width = band.width if within is None else within * band.h
    _, cps, n = _closest(band, np.abs(band.phi) < width)
    return cps, side_trace(field, band, cps, n, inside)


def extract_jumps(field: ScalarField, band: NarrowBand) -> JumpSet:
    """
    g0 = [w] and g1 = [dw/dn] for every band point, taken at its closest point
    (constant along normals) from one-sided traces. Points without a one-sided
    reading on both sides are masked out.
    """
    mask, cps, n = _closest(band, band.mask)
    ins = side_trace(field, band, cps, n, inside=True)
    out = side_trace(field, band, cps, n, inside=False)
    ok = ins.ok & out.ok
    valid = np.zeros(mask.shape, dtype=bool)
    valid[mask] = ok
    g0 = _scatter(np.where(ok, ins.value - out.value, 0.0), mask)
    g1 = _scatter(np.where(ok, ins.dn - out.dn, 0.0), mask)
    if not valid.any():
        raise BandError("no band point has one-sided samples on both sides of the interface")
    return JumpSet(band, g0, g1, masks=(valid, valid))


__all__ = [
    "SideTrace",
    "side_trace",
    "one_sided_jump",
    "one_sided_normal_traces",
    "extract_jumps",
]
