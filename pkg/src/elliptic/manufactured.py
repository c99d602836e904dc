# src/elliptic/manufactured.py
from __future__ import annotations

"""Manufactured piecewise solutions
----------------------------------
u = s_out + (s_in - s_out) H(phi): each branch knows its value, gradient,
Laplacian and gradient of the Laplacian, which is everything needed for the
exact solution, the Dirichlet data, the right-hand side f = lap(u) on each side
and the four jump quantities.
"""

from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from src.core.errors import GeometryError
from src.geometry.band import NarrowBand
from src.grid.grid import Centering, Grid
from src.splice.jumps import JumpSet

Fn = Callable[[np.ndarray], np.ndarray]

# floor on |x| so singular branches stay finite at band points covering the origin
_R_FLOOR = 1e-12


@dataclass(frozen=True)
class Branch:
    value: Fn
    grad: Fn
    lap: Fn
    grad_lap: Fn


def _zeros(points: np.ndarray) -> np.ndarray:
    return np.zeros(len(points))


def _zero_vec(points: np.ndarray) -> np.ndarray:
    return np.zeros(points.shape)


def _radius(points: np.ndarray) -> np.ndarray:
    return np.maximum(np.linalg.norm(points, axis=1), _R_FLOOR)


def constant(c: float) -> Branch:
    return Branch(lambda p: np.full(len(p), float(c)), _zero_vec, _zeros, _zero_vec)


def log_radial(offset: float, sign: float) -> Branch:
    """offset + sign*log(2|x|), harmonic in 2D."""
    return Branch(
        lambda p: offset + sign * np.log(2.0 * _radius(p)),
        lambda p: sign * p / _radius(p)[:, None] ** 2,
        _zeros,
        _zero_vec,
    )


def inverse_radius() -> Branch:
    """1/|x|, harmonic in 3D."""
    return Branch(
        lambda p: 1.0 / _radius(p),
        lambda p: -p / _radius(p)[:, None] ** 3,
        _zeros,
        _zero_vec,
    )


def exp_cos() -> Branch:
    """e^x cos y, harmonic."""

    def grad(p: np.ndarray) -> np.ndarray:
        e = np.exp(p[:, 0])
        return np.stack([e * np.cos(p[:, 1]), -e * np.sin(p[:, 1])], axis=1)

    return Branch(lambda p: np.exp(p[:, 0]) * np.cos(p[:, 1]), grad, _zeros, _zero_vec)


def exp_y2() -> Branch:
    """e^x y^2, with lap = e^x (2 + y^2)."""

    def grad(p: np.ndarray) -> np.ndarray:
        e = np.exp(p[:, 0])
        return np.stack([e * p[:, 1] ** 2, 2.0 * e * p[:, 1]], axis=1)

    def lap(p: np.ndarray) -> np.ndarray:
        return np.exp(p[:, 0]) * (2.0 + p[:, 1] ** 2)

    def grad_lap(p: np.ndarray) -> np.ndarray:
        e = np.exp(p[:, 0])
        return np.stack([e * (2.0 + p[:, 1] ** 2), 2.0 * e * p[:, 1]], axis=1)

    return Branch(lambda p: np.exp(p[:, 0]) * p[:, 1] ** 2, grad, lap, grad_lap)


@dataclass(frozen=True)
class PiecewiseSolution:
    name: str
    inside: Branch
    outside: Branch
    singular_outside: bool = False

    def _pick(self, attr: str, points: np.ndarray, inside: np.ndarray) -> np.ndarray:
        a = getattr(self.inside, attr)(points)
        b = getattr(self.outside, attr)(points)
        sel = inside.reshape((-1,) + (1,) * (a.ndim - 1))
        return np.where(sel, a, b)

    def sample(self, grid: Grid, centering: Centering, phi: np.ndarray) -> np.ndarray:
        """Exact u on the grid (inside where phi >= 0)."""
        pts = grid.points(centering)
        inside = phi.ravel() >= 0.0
        if self.singular_outside and np.any(~inside & (np.linalg.norm(pts, axis=1) < _R_FLOOR * 10)):
            raise GeometryError(f"{self.name}: singular point lies outside the interface")
        return self._pick("value", pts, inside).reshape(phi.shape)

    def rhs(self, grid: Grid, centering: Centering, phi: np.ndarray) -> np.ndarray:
        """f = lap(u) evaluated on the side of each grid point."""
        pts = grid.points(centering)
        return self._pick("lap", pts, phi.ravel() >= 0.0).reshape(phi.shape)

    def jumps(self, band: NarrowBand) -> JumpSet:
        """[u], [grad u].n, [lap u], [grad lap u].n with n the discrete band normal."""
        i, o = self.inside, self.outside

        def dot(a: np.ndarray, n: np.ndarray) -> np.ndarray:
            return np.sum(a * n, axis=1)

        return JumpSet.from_functions(
            band,
            g0=lambda p, n: i.value(p) - o.value(p),
            g1=lambda p, n: dot(i.grad(p) - o.grad(p), n),
            g_lap=lambda p, n: i.lap(p) - o.lap(p),
            g_dnlap=lambda p, n: dot(i.grad_lap(p) - o.grad_lap(p), n),
        )


SOLUTIONS: Dict[str, Callable[[], PiecewiseSolution]] = {
    # 1 + log(2|x|) outside, 1 inside: [u] = 0, [du/dn] = 2 on |x| = 0.5
    "log_circle": lambda: PiecewiseSolution("log_circle", constant(1.0), log_radial(1.0, 1.0), True),
    "exp_cos": lambda: PiecewiseSolution("exp_cos", exp_cos(), constant(0.0)),
    "log_outside": lambda: PiecewiseSolution("log_outside", constant(0.0), log_radial(1.0, -1.0), True),
    "inverse_radius": lambda: PiecewiseSolution("inverse_radius", constant(0.0), inverse_radius(), True),
    "exp_y2": lambda: PiecewiseSolution("exp_y2", exp_y2(), constant(0.0)),
}


def get_solution(name: str) -> PiecewiseSolution:
    try:
        return SOLUTIONS[name]()
    except KeyError:
        raise ValueError(f"unknown manufactured solution '{name}'; known: {', '.join(sorted(SOLUTIONS))}") from None


__all__ = [
    "Branch",
    "PiecewiseSolution",
    "SOLUTIONS",
    "get_solution",
    "constant",
    "log_radial",
    "inverse_radius",
    "exp_cos",
    "exp_y2",
]
