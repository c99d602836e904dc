# src/geometry/reconstruct.py
from __future__ import annotations

"""Signed distance reconstruction
--------------------------------
Builds a narrow-band signed distance from an arbitrary level set by projecting
each band point onto the zero set of a local quartic interpolant:

  1. seeds: zero crossings on grid edges, refined by Newton projection
  2. candidates: target points within b + 2h of a seed (kd-tree query)
  3. per point and per seed: constrained Newton on the closest-point KKT system
       (y - x) + lam grad p(y) = 0,   p(y) = 0
     first letting the interpolation stencil follow y, then frozen on one stencil
  4. distance |x - y*| from the best converged seed, signed by the input

Points where no seed converges fall back to p(x)/|grad p(x)|.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree

from src.core.errors import GeometryError
from src.geometry.band import NarrowBand
from src.grid.grid import Centering, ScalarField
from src.grid.norms import interpolate_to
from src.utils.config import get_settings
from src.utils.logger import get_logger
from src.utils.timing import measure

log = get_logger(__name__)

_NODES = np.arange(5, dtype=float)
# columns are the coefficients (in t^0..t^4) of the Lagrange basis on nodes 0..4
_LAGRANGE = np.linalg.inv(np.vander(_NODES, 5, increasing=True))


@dataclass
class ReconstructionStats:
    points: int = 0
    seeds: int = 0
    fallbacks: int = 0
    newton_iterations: int = 0

    @property
    def fallback_fraction(self) -> float:
        return self.fallbacks / self.points if self.points else 0.0


# ---------- Local quartic interpolant ----------

class QuarticInterpolant:
    """Tensor-product degree-4 Lagrange interpolant on a 5^d window of a grid field."""

    def __init__(self, field: ScalarField):
        self.values = field.data
        self.h = field.grid.h
        self.dim = field.grid.dim
        self.x0 = np.array([field.grid.axis_coords(a, field.centering)[0] for a in range(self.dim)])
        self.m = np.array(field.data.shape)
        if np.any(self.m < 5):
            raise GeometryError("quartic interpolation needs at least 5 points per axis")

    def base(self, points: np.ndarray) -> np.ndarray:
        s = (points - self.x0) / self.h
        return np.clip(np.rint(s).astype(np.intp) - 2, 0, self.m - 5)

    @staticmethod
    def _basis(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        powers = t[:, None] ** np.arange(5)
        d1 = np.zeros_like(powers)
        d1[:, 1:] = np.arange(1, 5) * powers[:, :4]
        d2 = np.zeros_like(powers)
        d2[:, 2:] = np.arange(2, 5) * np.arange(1, 4) * powers[:, :3]
        return powers @ _LAGRANGE, d1 @ _LAGRANGE, d2 @ _LAGRANGE

    def evaluate(
        self, points: np.ndarray, base: Optional[np.ndarray] = None
    ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Value (N,), gradient (N, d) and Hessian (N, d, d) at points."""
        if base is None:
            base = self.base(points)
        t = (points - self.x0) / self.h - base
        d = self.dim
        bases = [self._basis(t[:, a]) for a in range(d)]

        ar = np.arange(5)
        index = []
        for a in range(d):
            shape = [len(points)] + [1] * d
            shape[1 + a] = 5
            index.append((base[:, a][:, None] + ar[None, :]).reshape(shape))
        window = self.values[tuple(index)]

        letters = "abc"[:d]
        subscripts = "n" + letters + "," + ",".join("n" + c for c in letters) + "->n"

        def contract(orders) -> np.ndarray:
            return np.einsum(subscripts, window, *[bases[a][orders[a]] for a in range(d)])

        value = contract([0] * d)
        grad = np.empty((len(points), d))
        hess = np.empty((len(points), d, d))
        for a in range(d):
            o = [0] * d
            o[a] = 1
            grad[:, a] = contract(o) / self.h
            o[a] = 2
            hess[:, a, a] = contract(o) / self.h**2
            for b in range(a + 1, d):
                o = [0] * d
                o[a] = o[b] = 1
                hess[:, a, b] = hess[:, b, a] = contract(o) / self.h**2
        return value, grad, hess


# ---------- Seeds ----------

def _edge_seeds(field: ScalarField, interp: QuarticInterpolant, refine: int = 5) -> np.ndarray:
    values = field.data
    inside = values >= 0.0
    coords = field.grid.coords(field.centering)
    seeds = []
    for axis in range(field.grid.dim):
        lo = tuple(slice(None, -1) if a == axis else slice(None) for a in range(values.ndim))
        hi = tuple(slice(1, None) if a == axis else slice(None) for a in range(values.ndim))
        change = inside[lo] != inside[hi]
        if not change.any():
            continue
        v0, v1 = values[lo][change], values[hi][change]
        t = v0 / (v0 - v1)
        pts = np.stack([c[lo][change] for c in coords], axis=-1)
        pts[:, axis] += t * field.grid.h
        seeds.append(pts)
    if not seeds:
        raise GeometryError("level set has no sign change on the grid")
    y = np.concatenate(seeds)
    for _ in range(refine):
        p, g, _ = interp.evaluate(y)
        gg = np.sum(g * g, axis=1)
        ok = gg > 0.0
        y[ok] -= (p[ok] / gg[ok])[:, None] * g[ok]
    return y


# ---------- Closest-point Newton ----------

def _project(
    interp: QuarticInterpolant,
    x: np.ndarray,
    y0: np.ndarray,
    max_iter: int,
    tol: float,
    limit: float,
) -> Tuple[np.ndarray, np.ndarray, int]:
    n, d = x.shape
    y = y0.copy()
    _, g, _ = interp.evaluate(y)
    gg = np.sum(g * g, axis=1)
    lam = -np.sum((y - x) * g, axis=1) / np.where(gg > 0.0, gg, 1.0)
    converged = np.zeros(n, dtype=bool)
    failed = ~np.isfinite(lam)
    frozen: Optional[np.ndarray] = None
    switch = max_iter // 2
    iterations = 0

    for it in range(max_iter):
        active = ~converged & ~failed
        if not active.any():
            break
        iterations = it + 1
        if it == switch:
            frozen = interp.base(y)
        ya, xa, la = y[active], x[active], lam[active]
        p, g, hess = interp.evaluate(ya, None if frozen is None else frozen[active])

        jac = np.zeros((len(ya), d + 1, d + 1))
        jac[:, :d, :d] = np.eye(d) + la[:, None, None] * hess
        jac[:, :d, d] = g
        jac[:, d, :d] = g
        rhs = -np.concatenate([(ya - xa) + la[:, None] * g, p[:, None]], axis=1)

        det = np.linalg.det(jac)
        singular = ~np.isfinite(det) | (np.abs(det) < 1e-14)
        jac[singular] = np.eye(d + 1)
        rhs[singular] = 0.0
        delta = np.linalg.solve(jac, rhs[..., None])[..., 0]

        idx = np.flatnonzero(active)
        y[idx] += delta[:, :d]
        lam[idx] += delta[:, d]
        step = np.linalg.norm(delta[:, :d], axis=1)
        converged[idx] = (step < tol) & ~singular
        bad = singular | ~np.isfinite(step) | (np.linalg.norm(y[idx] - xa, axis=1) > limit)
        failed[idx] |= bad
    return y, converged & ~failed, iterations


# ---------- Public entry ----------

@measure("reconstruct_sdf")
def reconstruct_sdf(
    levelset: ScalarField,
    band_width: float,
    *,
    target_centering: Optional[Centering] = None,
    seeds_per_point: Optional[int] = None,
    max_iter: Optional[int] = None,
    max_fallback_fraction: Optional[float] = None,
) -> NarrowBand:
    """
    Narrow-band signed distance to the zero set of `levelset`, with half-width
    `band_width`, evaluated on `target_centering` (defaults to the input's).
    """
    settings = get_settings()
    k = seeds_per_point or settings.RECONSTRUCT_SEEDS
    max_iter = max_iter or settings.NEWTON_MAX_ITER
    max_fallback = settings.MAX_FALLBACK_FRACTION if max_fallback_fraction is None else max_fallback_fraction
    grid = levelset.grid
    h = grid.h
    target = Centering(target_centering or levelset.centering)

    values = levelset.data
    if not ((values >= 0.0).any() and (values < 0.0).any()):
        raise GeometryError("level set has no sign change on the grid")

    interp = QuarticInterpolant(levelset)
    seeds = _edge_seeds(levelset, interp)
    tree = cKDTree(seeds)
    k = min(k, len(seeds))

    points = grid.points(target)
    dist, nearest = tree.query(points, k=k, distance_upper_bound=band_width + 2.0 * h)
    dist = dist.reshape(len(points), k)
    nearest = nearest.reshape(len(points), k)
    candidate = np.isfinite(dist[:, 0])
    cand_idx = np.flatnonzero(candidate)
    x = points[cand_idx]

    best = np.full(len(x), np.inf)
    found = np.zeros(len(x), dtype=bool)
    iterations = 0
    for j in range(k):
        usable = np.isfinite(dist[cand_idx, j])
        if not usable.any():
            continue
        sub = np.flatnonzero(usable)
        y, ok, its = _project(
            interp,
            x[sub],
            seeds[nearest[cand_idx[sub], j]],
            max_iter=max_iter,
            tol=1e-10 * h,
            limit=band_width + 4.0 * h,
        )
        iterations = max(iterations, its)
        d = np.linalg.norm(y - x[sub], axis=1)
        # strict < keeps the earlier seed on ties
        better = ok & (d < best[sub])
        best[sub[better]] = d[better]
        found[sub[ok]] = True

    if target == levelset.centering:
        sign = np.where(values.ravel()[cand_idx] >= 0.0, 1.0, -1.0)
    else:
        sign = np.where(interp.evaluate(x)[0] >= 0.0, 1.0, -1.0)

    fallback = ~found
    if fallback.any():
        p, g, _ = interp.evaluate(x[fallback])
        gnorm = np.linalg.norm(g, axis=1)
        best[fallback] = np.abs(p) / np.where(gnorm > 0.0, gnorm, np.inf)

    stats = ReconstructionStats(
        points=len(x), seeds=len(seeds), fallbacks=int(fallback.sum()), newton_iterations=iterations
    )
    if stats.fallback_fraction > max_fallback:
        raise GeometryError(
            f"closest-point Newton failed at {stats.fallbacks}/{stats.points} band points "
            f"({100 * stats.fallback_fraction:.2f}% > {100 * max_fallback:.2f}%); geometry under-resolved"
        )
    if stats.fallbacks:
        log.warning("reconstruct_sdf: %d fallback points (of %d)", stats.fallbacks, stats.points)

    # far points keep the clamped sign of the input
    if target == levelset.centering:
        far_sign = np.where(values >= 0.0, 1.0, -1.0).ravel()
    else:
        far_sign = np.where(interpolate_to(levelset, points) >= 0.0, 1.0, -1.0)
    phi = far_sign * band_width
    phi[cand_idx] = sign * np.minimum(best, band_width)
    phi = phi.reshape(grid.shape(target))

    log.debug(
        "reconstruct_sdf: n=%d points=%d seeds=%d newton_iters=%d", grid.n, stats.points, stats.seeds, iterations
    )
    return NarrowBand(grid, target, phi, float(band_width), stats)


__all__ = ["ReconstructionStats", "QuarticInterpolant", "reconstruct_sdf"]
