# src/elliptic/solvers.py
from __future__ import annotations

"""Interface Poisson solves
--------------------------
The jump conditions enter only through the right-hand side

    lap_h u = f + lap_h(v H(phi)) - (lap_h v) H(phi)

so every solve here is a plain symmetric Laplacian (or Helmholtz) inversion.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from src.core.errors import GridError
from src.elliptic.matrices import Layout, dirichlet_lift, interior_slice, mass_matrix
from src.elliptic.multigrid import MultigridSolver, SolverStats
from src.geometry.band import NarrowBand
from src.grid.grid import Centering, Grid, ScalarField
from src.splice.extrapolation import JumpExtrapolation, build_extrapolation
from src.splice.jumps import JumpSet
from src.splice.operators import splice_correction
from src.stencil.operators import LAPLACIAN5
from src.utils.config import SolverOptions, get_settings
from src.utils.logger import get_logger

log = get_logger(__name__)


class BoundaryKind(str, Enum):
    dirichlet = "dirichlet"
    neumann = "neumann"


@dataclass(eq=False)
class PoissonProblem:
    """lap u = f off the interface, with jumps across it and data on the box boundary."""

    grid: Grid
    f: np.ndarray
    band: Optional[NarrowBand] = None
    jumps: Optional[JumpSet] = None
    boundary: Optional[np.ndarray] = None
    kind: BoundaryKind = BoundaryKind.dirichlet
    q: int = 3
    centering: Centering = Centering.node

    def __post_init__(self) -> None:
        shape = self.grid.shape(self.centering)
        if tuple(self.f.shape) != shape:
            raise GridError(f"f has shape {self.f.shape}, expected {shape}")
        if self.jumps is not None and self.band is None:
            self.band = self.jumps.band
        if self.boundary is not None and tuple(self.boundary.shape) != shape:
            raise GridError(f"boundary data has shape {self.boundary.shape}, expected {shape}")

    @property
    def nullspace(self) -> bool:
        return self.kind == BoundaryKind.neumann


def _options(options: Optional[SolverOptions]) -> SolverOptions:
    return options or SolverOptions.from_settings(get_settings())


def spliced_rhs(problem: PoissonProblem, v: Optional[JumpExtrapolation] = None) -> np.ndarray:
    """f + lap_h(v H) - (lap_h v) H; just f when there are no jumps."""
    if v is None:
        if problem.jumps is None:
            return problem.f.copy()
        v = build_extrapolation(problem.band, problem.jumps, problem.q, op=LAPLACIAN5)
    return problem.f - splice_correction(LAPLACIAN5, v)


def solve_dirichlet(
    problem: PoissonProblem,
    options: Optional[SolverOptions] = None,
    v: Optional[JumpExtrapolation] = None,
) -> Tuple[ScalarField, SolverStats]:
    """Node-centered Dirichlet solve; boundary nodes take the given values."""
    g = problem.grid
    if problem.centering != Centering.node:
        raise GridError("solve_dirichlet works on node-centered data")
    boundary = np.zeros(g.shape(Centering.node)) if problem.boundary is None else problem.boundary
    rhs = spliced_rhs(problem, v)
    inner = interior_slice(g.dim)
    # -L u = lift(g) - rhs  (A = -L is SPD)
    b = (dirichlet_lift(boundary, g.h) - rhs[inner]).ravel()

    solver = MultigridSolver(g.n, g.dim, Layout.node_dirichlet, g.h, options=_options(options))
    x, stats = solver.solve(b)
    u = boundary.copy()
    u[inner] = x.reshape(rhs[inner].shape)
    log.debug("solve_dirichlet: n=%d %s iterations=%d residual=%.2e", g.n, stats.solver, stats.iterations, stats.residual)
    return ScalarField(g, Centering.node, u), stats


def solve_neumann_nodal(
    rhs_node: ScalarField | np.ndarray,
    grid: Optional[Grid] = None,
    options: Optional[SolverOptions] = None,
) -> Tuple[ScalarField, SolverStats]:
    """Homogeneous-Neumann node Laplacian solve; returns the zero-mean solution."""
    if isinstance(rhs_node, ScalarField):
        grid = rhs_node.grid
        data = rhs_node.data
    else:
        data = np.asarray(rhs_node, dtype=float)
    if grid is None:
        raise GridError("solve_neumann_nodal needs a grid for raw arrays")
    if tuple(data.shape) != grid.shape(Centering.node):
        raise GridError(f"rhs has shape {data.shape}, expected node shape {grid.shape(Centering.node)}")

    weights = mass_matrix(grid.n, grid.dim, Layout.node_neumann).diagonal()
    solver = MultigridSolver(grid.n, grid.dim, Layout.node_neumann, grid.h, options=_options(options))
    # L psi = M rhs  ->  (-L) psi = -M rhs
    x, stats = solver.solve(-weights * data.ravel())
    stats.compatibility = -stats.compatibility
    if abs(stats.compatibility) > 1e-8 * max(1.0, float(np.max(np.abs(data)))):
        log.debug("solve_neumann_nodal: projected out rhs mean %.3e", stats.compatibility)
    return ScalarField(grid, Centering.node, x.reshape(data.shape)), stats


def solve_helmholtz(
    rhs_cell: np.ndarray,
    coeff: float,
    grid: Grid,
    options: Optional[SolverOptions] = None,
) -> Tuple[np.ndarray, SolverStats]:
    """(I - coeff lap_h) u = rhs on cells, zero wall values; leading axes are components."""
    rhs = np.asarray(rhs_cell, dtype=float)
    spatial = grid.shape(Centering.cell)
    comps = rhs.reshape((-1,) + spatial)
    solver = MultigridSolver(grid.n, grid.dim, Layout.cell_dirichlet, grid.h, shift=1.0, coeff=coeff, options=_options(options))
    out = np.empty_like(comps)
    total = SolverStats(solver="")
    for k, c in enumerate(comps):
        x, stats = solver.solve(c.ravel())
        out[k] = x.reshape(spatial)
        total.iterations = max(total.iterations, stats.iterations)
        total.residual = max(total.residual, stats.residual)
        total.wall_ms += stats.wall_ms
        total.solver = stats.solver
    return out.reshape(rhs.shape), total


__all__ = [
    "BoundaryKind",
    "PoissonProblem",
    "spliced_rhs",
    "solve_dirichlet",
    "solve_neumann_nodal",
    "solve_helmholtz",
]
