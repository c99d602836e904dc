# src/harness/drivers.py
from __future__ import annotations

"""Experiment drivers
--------------------
One measurement per (experiment, n): build the grid and band, run the
numerical pipeline and return the metric values. Rows above the desk-scale
caps are reported as "not run".
"""

from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np

from src.core.errors import GeometryError
from src.core.experiment_loader import Experiment, ExperimentKind
from src.harness.results import STATUS_NOT_RUN, ExperimentResult, ResultRow
from src.elliptic.manufactured import get_solution
from src.elliptic.matrices import interior_slice
from src.elliptic.solvers import PoissonProblem, solve_dirichlet
from src.geometry.band import NarrowBand, band_from_shape
from src.geometry.reconstruct import reconstruct_sdf
from src.grid.grid import Centering, Grid, ScalarField, make_grid
from src.grid.norms import l2_norm, linf_norm
from src.navier_stokes.runner import FlowRun, between_grid_errors, pressure_slice, run, volume_error
from src.quadrature.integrate import SurfaceIntegrand, enclosed_volume, integrate_surface, surface_area
from src.splice.extrapolation import build_extrapolation
from src.splice.operators import spliced_apply
from src.stencil.operators import LAPLACIAN5
from src.utils.config import SdfSource, SolverOptions, get_settings
from src.utils.logger import get_logger, log_with_context
from src.utils.timing import Stopwatch, format_elapsed

log = get_logger(__name__)

AlphaFn = Callable[[np.ndarray, np.ndarray], np.ndarray]

INTEGRANDS: Dict[str, AlphaFn] = {
    "one": lambda p, n: np.ones(len(p)),
    "exp_x": lambda p, n: np.exp(p[:, 0]),
}


# ---------- shared pieces ----------

def experiment_grid(exp: Experiment, n: int) -> Grid:
    return make_grid(exp.dim, n, exp.lower, exp.upper)


def experiment_band(exp: Experiment, grid: Grid) -> NarrowBand:
    """Node band of the experiment's shape, from the exact distance or a reconstruction."""
    width = exp.band_width_cells * grid.h
    if exp.sdf == SdfSource.exact:
        try:
            return band_from_shape(exp.shape, grid, Centering.node, width)
        except GeometryError:
            log.info("%s: no closed-form distance, reconstructing", exp.id)
    levelset = ScalarField(grid, Centering.node, exp.shape.sample(grid, Centering.node))
    return reconstruct_sdf(levelset, width)


def _errors(grid: Grid, err: np.ndarray) -> Dict[str, float]:
    region = np.zeros(err.shape, dtype=bool)
    region[interior_slice(grid.dim)] = True
    field = ScalarField(grid, Centering.node, err)
    return {"linf": linf_norm(field, region), "l2": l2_norm(field, region)}


# ---------- per-kind measurements ----------

def measure_splice_laplacian(exp: Experiment, n: int, options: Optional[SolverOptions] = None) -> Dict[str, float]:
    """Error of the spliced five-point Laplacian of a discontinuous function."""
    grid = experiment_grid(exp, n)
    band = experiment_band(exp, grid)
    sol = get_solution(exp.solution)
    u = sol.sample(grid, Centering.node, band.phi)
    v = build_extrapolation(band, sol.jumps(band), q=exp.q, op=LAPLACIAN5)
    lap = spliced_apply(LAPLACIAN5, u, v)
    exact = sol.rhs(grid, Centering.node, band.phi)
    return _errors(grid, lap - exact)


def measure_poisson(exp: Experiment, n: int, options: Optional[SolverOptions] = None) -> Dict[str, float]:
    """Dirichlet interface Poisson solve against the manufactured solution."""
    grid = experiment_grid(exp, n)
    band = experiment_band(exp, grid)
    sol = get_solution(exp.solution)
    exact = sol.sample(grid, Centering.node, band.phi)
    problem = PoissonProblem(
        grid=grid,
        f=sol.rhs(grid, Centering.node, band.phi),
        band=band,
        jumps=sol.jumps(band),
        boundary=exact,
        q=exp.q,
    )
    u, stats = solve_dirichlet(problem, options)
    log.debug("%s n=%d: %s iterations=%d", exp.id, n, stats.solver, stats.iterations)
    return _errors(grid, u.data - exact)


def measure_quadrature(exp: Experiment, n: int, options: Optional[SolverOptions] = None) -> Dict[str, float]:
    grid = experiment_grid(exp, n)
    band = experiment_band(exp, grid)
    if exp.kind == ExperimentKind.quadrature_perimeter:
        value, exact = surface_area(band), exp.shape.perimeter()
    elif exp.kind == ExperimentKind.quadrature_volume:
        value, exact = enclosed_volume(band), exp.shape.volume()
    else:
        if exp.integrand not in INTEGRANDS:
            raise ValueError(f"unknown integrand '{exp.integrand}'; known: {', '.join(sorted(INTEGRANDS))}")
        value, exact = integrate_surface(SurfaceIntegrand(band, INTEGRANDS[exp.integrand]), band), exp.exact
    if exp.exact is not None:
        exact = exp.exact
    if exact is None:
        raise ValueError(f"{exp.id}: no exact value for shape '{exp.shape.kind}'")
    return {"error": abs(value - float(exact))}


MEASURES = {
    ExperimentKind.splice_laplacian: measure_splice_laplacian,
    ExperimentKind.poisson: measure_poisson,
    ExperimentKind.quadrature_perimeter: measure_quadrature,
    ExperimentKind.quadrature_integral: measure_quadrature,
    ExperimentKind.quadrature_volume: measure_quadrature,
}


# ---------- sweeps ----------

def capped(exp: Experiment, n: int) -> bool:
    return n > get_settings().max_n(exp.dim, navier_stokes=exp.kind.is_flow)


def _static_sweep(exp: Experiment, ns: List[int], options: Optional[SolverOptions]) -> ExperimentResult:
    result = ExperimentResult(exp.id, exp.metrics)
    measure = MEASURES[exp.kind]
    for n in ns:
        if capped(exp, n):
            result.rows.append(ResultRow(n, status=STATUS_NOT_RUN, note="above desk-scale cap"))
            continue
        nlog = log_with_context(log, n=n)
        with Stopwatch() as sw:
            values = measure(exp, n, options)
        nlog.info(
            "%s n=%d %s (%s)",
            exp.id, n, " ".join(f"{k}={v:.3e}" for k, v in values.items()), format_elapsed(sw.elapsed_ms()),
        )
        result.rows.append(ResultRow(n, values))
    return result


def _flow_sweep(
    exp: Experiment,
    ns: List[int],
    options: Optional[SolverOptions],
    baseline: bool,
    snapshot_dir: Optional[Path] = None,
) -> ExperimentResult:
    config = exp.flow
    result = ExperimentResult(exp.id, exp.metrics)
    previous: Optional[FlowRun] = None
    for n in ns:
        if capped(exp, n):
            result.rows.append(ResultRow(n, status=STATUS_NOT_RUN, note="above desk-scale cap"))
            previous = None
            continue
        flow = run(config, n, baseline=baseline, options=options, snapshot_dir=snapshot_dir, label=exp.id)
        values: Dict[str, Optional[float]] = {"E_u": None, "E_p": None, "E_phi": None}
        if previous is not None and previous.n * 2 == n:
            values.update(between_grid_errors(flow, previous))
        values["E_vol"] = volume_error(flow)
        result.rows.append(ResultRow(n, values))
        result.volume_series[n] = list(flow.volumes)
        result.pressure_slices[n] = pressure_slice(flow.final, config.slice_x)
        result.extra.setdefault("curvature_clamps", {})[str(n)] = flow.clamped
        previous = flow
    return result


def run_experiment(
    exp: Experiment,
    n_list: Optional[List[int]] = None,
    options: Optional[SolverOptions] = None,
    snapshot_dir: Optional[Path] = None,
) -> ExperimentResult:
    """Sweep an experiment over its resolutions."""
    ns = sorted(set(n_list or exp.n_list))
    if exp.kind.is_flow:
        return _flow_sweep(exp, ns, options, exp.kind == ExperimentKind.navier_stokes_delta, snapshot_dir)
    return _static_sweep(exp, ns, options)


def run_delta_baseline(
    exp: Experiment,
    n_list: Optional[List[int]] = None,
    options: Optional[SolverOptions] = None,
    snapshot_dir: Optional[Path] = None,
) -> ExperimentResult:
    """The smoothed-delta reference for a flow experiment."""
    if not exp.kind.is_flow:
        raise ValueError(f"{exp.id} is not a flow experiment")
    ns = sorted(set(n_list or exp.n_list))
    return _flow_sweep(exp, ns, options, True, snapshot_dir)


__all__ = [
    "INTEGRANDS",
    "MEASURES",
    "experiment_grid",
    "experiment_band",
    "measure_splice_laplacian",
    "measure_poisson",
    "measure_quadrature",
    "capped",
    "run_experiment",
    "run_delta_baseline",
]
