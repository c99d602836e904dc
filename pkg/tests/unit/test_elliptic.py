import numpy as np
import pytest

from src.core.errors import GridError, SolverError
from src.elliptic.manufactured import SOLUTIONS, get_solution
from src.elliptic.matrices import Layout, mass_matrix
from src.elliptic.multigrid import MultigridSolver
from src.elliptic.solvers import PoissonProblem, solve_dirichlet, solve_helmholtz, solve_neumann_nodal, spliced_rhs
from src.grid.grid import Centering, ScalarField, make_grid
from src.utils.config import SolverKind, SolverOptions

PI = np.pi


def _dirichlet_error(n: int, options=None) -> float:
    g = make_grid(2, n, 0.0, 1.0)
    x, y = g.coords(Centering.node)
    exact = np.sin(PI * x) * np.sin(PI * y) + x
    problem = PoissonProblem(grid=g, f=-2.0 * PI**2 * np.sin(PI * x) * np.sin(PI * y), boundary=exact)
    u, _ = solve_dirichlet(problem, options)
    return float(np.abs(u.data - exact).max())


def test_dirichlet_solve_is_second_order():
    e16, e32 = _dirichlet_error(16), _dirichlet_error(32)
    assert e32 < 1e-3
    assert np.log2(e16 / e32) > 1.9


def test_pcg_matches_multigrid():
    opts = SolverOptions(kind=SolverKind.pcg)
    assert _dirichlet_error(24, opts) == pytest.approx(_dirichlet_error(24), rel=1e-6)


def test_problem_shape_is_checked():
    g = make_grid(2, 8, 0.0, 1.0)
    with pytest.raises(GridError):
        PoissonProblem(grid=g, f=np.zeros((8, 8)))


def test_spliced_rhs_without_jumps_is_f():
    g = make_grid(2, 8, 0.0, 1.0)
    f = np.ones((9, 9))
    out = spliced_rhs(PoissonProblem(grid=g, f=f))
    assert np.array_equal(out, f) and out is not f


def test_neumann_solution_has_zero_mean():
    errs = []
    for n in (16, 32):
        g = make_grid(2, n, 0.0, 1.0)
        x, y = g.coords(Centering.node)
        rhs = np.cos(PI * x) * np.cos(PI * y)
        psi, _ = solve_neumann_nodal(ScalarField(g, Centering.node, rhs))
        w = mass_matrix(n, 2, Layout.node_neumann).diagonal()
        assert abs(np.dot(w, psi.data.ravel())) < 1e-10
        errs.append(float(np.abs(psi.data + rhs / (2.0 * PI**2)).max()))
    assert errs[1] < 2e-3
    assert errs[0] / errs[1] > 3.5


def test_neumann_reports_incompatible_rhs():
    g = make_grid(2, 16, 0.0, 1.0)
    psi, stats = solve_neumann_nodal(np.ones((17, 17)), grid=g)
    assert stats.compatibility == pytest.approx(1.0)
    assert np.abs(psi.data).max() < 1e-10


def test_neumann_needs_grid_for_arrays():
    with pytest.raises(GridError):
        solve_neumann_nodal(np.zeros((9, 9)))


def test_helmholtz_solve_per_component():
    g = make_grid(2, 32, 0.0, 1.0)
    x, y = g.coords(Centering.cell)
    u = np.sin(PI * x) * np.sin(PI * y)
    coeff = 0.01
    rhs = np.stack([(1.0 + 2.0 * PI**2 * coeff) * u, -(1.0 + 2.0 * PI**2 * coeff) * u])
    out, stats = solve_helmholtz(rhs, coeff, g)
    assert out.shape == rhs.shape
    assert np.abs(out[0] - u).max() < 1e-3
    assert np.abs(out[1] + u).max() < 1e-3
    assert stats.iterations >= 1


def test_multigrid_reports_non_convergence():
    solver = MultigridSolver(32, 2, Layout.node_dirichlet, 1.0 / 32, options=SolverOptions(max_cycles=1, tolerance=1e-14))
    with pytest.raises(SolverError, match="did not reach"):
        solver.solve(np.random.default_rng(0).standard_normal(31 * 31))


def test_manufactured_solutions_registry():
    assert {"log_circle", "exp_cos", "log_outside", "inverse_radius", "exp_y2"} <= set(SOLUTIONS)
    with pytest.raises(ValueError, match="unknown manufactured solution"):
        get_solution("nope")


def test_log_circle_jump_data(circle_band):
    sol = get_solution("log_circle")
    jumps = sol.jumps(circle_band)
    # [u] = 0 and [du/dn] = 2 on the circle of radius 1/2
    x, y = circle_band.grid.coords(Centering.node)
    on = circle_band.normal_mask & (np.abs(np.hypot(x, y) - 0.5) < 0.5 * circle_band.h)
    assert np.abs(jumps.g0[on]).max() < 0.02
    assert jumps.g1[on] == pytest.approx(np.full(int(on.sum()), 2.0), abs=0.1)
