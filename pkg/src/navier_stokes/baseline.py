# src/navier_stokes/baseline.py
from __future__ import annotations

"""Smoothed-delta baseline
-------------------------
Continuum-surface-force reference: the tension enters as a bulk force
-sigma kappa n delta_eps(phi) in an unspliced projection step. kappa is the
five-point Laplacian of the cell distance, n its centered gradient.
"""

from typing import Optional

import numpy as np

from src.core.errors import PlanError, SpliceError, StepError
from src.elliptic.solvers import solve_helmholtz, solve_neumann_nodal
from src.geometry.band import NarrowBand
from src.grid.grid import Centering, Grid
from src.navier_stokes.advection import eno_advect
from src.navier_stokes.state import FlowConfig, FlowState, StepPlan
from src.navier_stokes.stepper import reconstruct_levels
from src.stencil.operators import GRADIENT2, LAPLACIAN5
from src.stencil.staggered import DIV_CELL_TO_NODE, GRAD_NODE_TO_CELL
from src.utils.config import SolverOptions
from src.utils.logger import get_logger

log = get_logger(__name__)

# smoothing half-width in cells
SMOOTHING_CELLS = 2.0


def smoothed_delta(a: np.ndarray, eps: float) -> np.ndarray:
    """(1/2eps)(1 + cos(pi a/eps)) on |a| < eps, zero elsewhere."""
    return np.where(np.abs(a) < eps, (1.0 + np.cos(np.pi * a / eps)) / (2.0 * eps), 0.0)


def tension_force(band: NarrowBand, sigma: float, eps: Optional[float] = None) -> np.ndarray:
    h, dim = band.h, band.grid.dim
    eps = SMOOTHING_CELLS * h if eps is None else eps
    kappa = LAPLACIAN5.apply(band.phi, h, dim)
    normal = GRADIENT2.apply(band.phi, h, dim)
    return -sigma * kappa * normal * smoothed_delta(band.phi, eps)


class SmoothedDeltaStepper:
    """Same interface as SplicedStepper; p starts at zero."""

    name = "smoothed_delta"

    def __init__(self, config: FlowConfig, grid: Grid, plan: StepPlan, options: Optional[SolverOptions] = None):
        self.config = config
        self.grid = grid
        self.plan = plan
        self.options = options

    def initial_state(self) -> FlowState:
        g = self.grid
        raw = self.config.shape.sample(g, Centering.cell)
        band_cell, band_node = reconstruct_levels(raw, g, self.plan.band_width)
        return FlowState(
            grid=g,
            u=np.zeros((g.dim,) + g.shape(Centering.cell)),
            p=np.zeros(g.shape(Centering.node)),
            phi=band_cell.phi.copy(),
            band_cell=band_cell,
            band_node=band_node,
        )

    def advance(self, state: FlowState) -> FlowState:
        self.plan.check_cfl(state.u, self.grid.h)
        try:
            return self._advance(state)
        except PlanError:
            raise
        except SpliceError as exc:
            raise StepError(state.step, exc) from exc

    def _advance(self, state: FlowState) -> FlowState:
        plan, g = self.plan, self.grid
        h, dim, dt, rho = g.h, g.dim, plan.dt, plan.rho
        u, p = state.u, state.p

        band = state.band_cell
        if band is None:
            band, _ = reconstruct_levels(state.phi, g, plan.band_width)
        phi_next = state.phi - dt * eno_advect(u, state.phi, h)
        band_c1, band_n1 = reconstruct_levels(phi_next, g, plan.band_width)
        if plan.reinitializes(state.step):
            phi_next = band_c1.phi.copy()

        force = tension_force(band, plan.sigma)
        coeff = plan.mu * dt / rho
        rhs = u - dt * eno_advect(u, u, h) - (dt / rho) * GRAD_NODE_TO_CELL.apply(p, h, dim) + (dt / rho) * force
        u_star, _ = solve_helmholtz(rhs, coeff, g, self.options)
        psi, _ = solve_neumann_nodal((rho / dt) * DIV_CELL_TO_NODE.apply(u_star, h, dim), g, self.options)
        u_next = u_star - (dt / rho) * GRAD_NODE_TO_CELL.apply(psi.data, h, dim)

        return state.advanced(
            u=u_next,
            p=p + psi.data,
            phi=phi_next,
            t=state.t + dt,
            step=state.step + 1,
            band_cell=band_c1,
            band_node=band_n1,
        )


__all__ = ["SmoothedDeltaStepper", "smoothed_delta", "tension_force", "SMOOTHING_CELLS"]
