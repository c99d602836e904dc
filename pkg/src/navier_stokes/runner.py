# src/navier_stokes/runner.py
from __future__ import annotations

"""Flow runs and convergence metrics
-----------------------------------
A run steps one resolution to the final time, keeping snapshots at evenly
spaced record times and the enclosed volume every `volume_every` steps.
Between-grid metrics pair snapshots of an n and a 2n run at equal times:

  E_u    max over components of the 2x2 cell-averaged velocity difference
  E_p    shared-node pressure difference (zero-mean), skipping nodes whose
         side of the interface differs between the two grids
  E_phi  shared-node distance difference inside both bands
  E_Vol  sup over recorded times of |Vol(t) - V0|
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from src.core.errors import GridError
from src.elliptic.matrices import Layout, mass_matrix
from src.grid.grid import Centering, RefinementPair, ScalarField
from src.grid.io import dump_field, export_slice_csv
from src.navier_stokes.baseline import SmoothedDeltaStepper
from src.navier_stokes.state import FlowConfig, FlowState, StepPlan
from src.navier_stokes.stepper import SplicedStepper
from src.quadrature.integrate import enclosed_volume
from src.utils.config import SolverOptions, get_settings
from src.utils.logger import get_logger, log_with_context
from src.utils.timing import Stopwatch, format_elapsed

log = get_logger(__name__)

Stepper = Union[SplicedStepper, SmoothedDeltaStepper]


@dataclass(frozen=True, eq=False)
class Snapshot:
    t: float
    step: int
    u: np.ndarray
    p: np.ndarray
    phi_node: np.ndarray
    node_mask: np.ndarray


@dataclass
class FlowRun:
    config: FlowConfig
    n: int
    plan: StepPlan
    method: str
    final: FlowState
    snapshots: List[Snapshot] = field(default_factory=list)
    volumes: List[Tuple[float, float]] = field(default_factory=list)
    wall_ms: float = 0.0

    @property
    def clamped(self) -> int:
        return self.final.clamped


# ---------- pieces ----------

def flow_volume(state: FlowState) -> float:
    if state.band_cell is None:
        raise GridError("state has no cell reconstruction to integrate")
    return enclosed_volume(state.band_cell)


def make_stepper(
    config: FlowConfig,
    n: int,
    baseline: bool = False,
    options: Optional[SolverOptions] = None,
) -> Stepper:
    grid = config.grid(n)
    plan = StepPlan.for_grid(config, grid, clamp_curvature=get_settings().CURVATURE_CLAMP)
    cls = SmoothedDeltaStepper if baseline else SplicedStepper
    return cls(config, grid, plan, options)


def record_steps(plan: StepPlan, count: int) -> List[int]:
    return sorted({max(1, int(round(k * plan.steps / count))) for k in range(1, count + 1)})


def _snapshot(state: FlowState) -> Snapshot:
    band = state.band_node
    if band is None:
        raise GridError("state has no node reconstruction")
    return Snapshot(state.t, state.step, state.u.copy(), state.p.copy(), band.phi.copy(), band.mask.copy())


def dump_snapshot(state: FlowState, directory: Path, label: str) -> None:
    g = state.grid
    stem = f"{label}_step{state.step:06d}"
    for k in range(g.dim):
        dump_field(directory / f"{stem}_u{k}", ScalarField(g, Centering.cell, state.u[k]))
    dump_field(directory / f"{stem}_p", ScalarField(g, Centering.node, state.p))
    dump_field(directory / f"{stem}_phi", ScalarField(g, Centering.cell, state.phi))


# ---------- run ----------

def run(
    config: FlowConfig,
    n: int,
    *,
    baseline: bool = False,
    options: Optional[SolverOptions] = None,
    snapshot_dir: Optional[Path] = None,
    label: str = "flow",
) -> FlowRun:
    """Step one resolution from t=0 to the final time."""
    stepper = make_stepper(config, n, baseline, options)
    plan = stepper.plan
    rlog = log_with_context(log, n=n, method=stepper.name)
    rlog.info("flow run: n=%d steps=%d dt=%.3e band=%gh", n, plan.steps, plan.dt, config.band_cells)

    with Stopwatch() as sw:
        state = stepper.initial_state()
        flow = FlowRun(config, n, plan, stepper.name, state)
        flow.volumes.append((0.0, flow_volume(state)))
        wanted = set(record_steps(plan, config.record_count))
        report_every = max(1, plan.steps // 8)
        for _ in range(plan.steps):
            state = stepper.advance(state)
            if state.step % config.volume_every == 0 or state.step == plan.steps:
                flow.volumes.append((state.t, flow_volume(state)))
            if state.step in wanted:
                flow.snapshots.append(_snapshot(state))
                if snapshot_dir is not None:
                    dump_snapshot(state, Path(snapshot_dir), f"{label}_n{n}")
            if state.step % report_every == 0:
                rlog.info("step %d/%d t=%.4f max|u|=%.3e", state.step, plan.steps, state.t, float(np.max(np.abs(state.u))))
        flow.final = state
    flow.wall_ms = sw.elapsed_ms()
    if flow.clamped:
        rlog.warning("curvature clamped at %d point-steps", flow.clamped)
    rlog.info("flow run finished in %s", format_elapsed(flow.wall_ms))
    return flow


# ---------- metrics ----------

def volume_series(flow: FlowRun) -> List[Tuple[float, float]]:
    return list(flow.volumes)


def volume_error(flow: FlowRun, reference: Optional[float] = None) -> float:
    """E_Vol against the closed-form volume, or the initial discrete one when there is none."""
    if reference is None:
        closed = flow.config.shape.volume()
        reference = flow.volumes[0][1] if closed is None else float(closed)
    return max(abs(v - reference) for _, v in flow.volumes)


def _zero_mean(p: np.ndarray, n: int) -> np.ndarray:
    weights = mass_matrix(n, p.ndim, Layout.node_neumann).diagonal().reshape(p.shape)
    return p - np.sum(weights * p) / np.sum(weights)


def between_grid_errors(fine: FlowRun, coarse: FlowRun) -> Dict[str, float]:
    """E_u, E_p and E_phi of a (2n, n) pair, maximized over the shared record times."""
    if fine.n != 2 * coarse.n:
        raise GridError(f"fine run n={fine.n} is not a refinement of n={coarse.n}")
    gf, gc = fine.config.grid(fine.n), coarse.config.grid(coarse.n)
    errors = {"E_u": 0.0, "E_p": 0.0, "E_phi": 0.0}
    pairs = 0
    for sc in coarse.snapshots:
        match = [sf for sf in fine.snapshots if np.isclose(sf.t, sc.t, rtol=0.0, atol=1e-9)]
        if not match:
            continue
        sf = match[0]
        pairs += 1
        for k in range(gc.dim):
            pair = RefinementPair(ScalarField(gc, Centering.cell, sc.u[k]), ScalarField(gf, Centering.cell, sf.u[k]))
            errors["E_u"] = max(errors["E_u"], pair.compare())

        mismatch = (sf.phi_node[::2, ::2] >= 0.0) != (sc.phi_node >= 0.0)
        pair = RefinementPair(
            ScalarField(gc, Centering.node, _zero_mean(sc.p, gc.n)),
            ScalarField(gf, Centering.node, _zero_mean(sf.p, gf.n)),
        )
        errors["E_p"] = max(errors["E_p"], pair.compare(exclusion_mask=mismatch))

        pair = RefinementPair(
            ScalarField(gc, Centering.node, sc.phi_node, sc.node_mask),
            ScalarField(gf, Centering.node, sf.phi_node, sf.node_mask),
        )
        errors["E_phi"] = max(errors["E_phi"], pair.compare())
    if pairs == 0:
        raise GridError("runs share no record times")
    return errors


def pressure_slice(state: FlowState, x: float = 0.5) -> List[Tuple[float, float]]:
    """(y, p) along the node column nearest to x."""
    g = state.grid
    xs = g.axis_coords(0, Centering.node)
    i = int(np.argmin(np.abs(xs - x)))
    ys = g.axis_coords(1, Centering.node)
    return [(float(y), float(v)) for y, v in zip(ys, state.p[i, :])]


def write_pressure_slice(path: Path, state: FlowState, x: float = 0.5) -> Path:
    return export_slice_csv(path, ScalarField(state.grid, Centering.node, state.p), along=1, at={0: x})


def laplace_balance_residual(state: FlowState) -> float:
    """max |u|; zero for an exact static balance of pressure jump and tension."""
    return float(np.max(np.abs(state.u)))


__all__ = [
    "Snapshot",
    "FlowRun",
    "flow_volume",
    "make_stepper",
    "record_steps",
    "dump_snapshot",
    "run",
    "volume_series",
    "volume_error",
    "between_grid_errors",
    "pressure_slice",
    "write_pressure_slice",
    "laplace_balance_residual",
]
