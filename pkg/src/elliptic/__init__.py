# src/elliptic/__init__.py
from src.elliptic.manufactured import PiecewiseSolution, SOLUTIONS, get_solution
from src.elliptic.matrices import Layout, laplacian_matrix, mass_matrix
from src.elliptic.multigrid import MultigridSolver, SolverStats, is_multigrid_friendly
from src.elliptic.solvers import (
    BoundaryKind,
    PoissonProblem,
    solve_dirichlet,
    solve_helmholtz,
    solve_neumann_nodal,
    spliced_rhs,
)

__all__ = [
    "PiecewiseSolution",
    "SOLUTIONS",
    "get_solution",
    "Layout",
    "laplacian_matrix",
    "mass_matrix",
    "MultigridSolver",
    "SolverStats",
    "is_multigrid_friendly",
    "BoundaryKind",
    "PoissonProblem",
    "solve_dirichlet",
    "solve_helmholtz",
    "solve_neumann_nodal",
    "spliced_rhs",
]
