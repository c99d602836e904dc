# src/navier_stokes/stepper.py
from __future__ import annotations

"""Jump-spliced projection step
------------------------------
One first-order step of the approximate projection method. Every operator
that reads across the interface is spliced with the jump extrapolation of the
field it acts on; side changes of grid points between t^n and t^{n+1} are
handled by the H(phi^{n+1}) - H(phi^n) terms.

    1. phi^{n+1} = phi^n - dt ENO(u^n, phi^n)
    2. distance reconstructions at both levels, on cells and on nodes
    3. every reinit period phi^{n+1} is replaced by its reconstruction
    4-6. curvature, f_n and the velocity/pressure extrapolations at both levels
    7. v_star and v_psi
    8. Helmholtz solve for u*, Neumann solve for psi, velocity/pressure update
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.core.errors import BandError, PlanError, SpliceError, StepError
from src.elliptic.solvers import solve_helmholtz, solve_neumann_nodal
from src.geometry.band import NarrowBand
from src.geometry.reconstruct import reconstruct_sdf
from src.grid.grid import Centering, Grid, ScalarField
from src.navier_stokes.advection import eno_advect, jeno_advect
from src.navier_stokes.jumps import tension_jumps
from src.navier_stokes.state import FlowConfig, FlowState, StepPlan
from src.splice.extrapolation import JumpExtrapolation, build_extrapolation
from src.splice.operators import splice_correction, spliced_apply
from src.stencil.operators import LAPLACIAN5
from src.stencil.staggered import DIV_CELL_TO_NODE, GRAD_NODE_TO_CELL
from src.utils.config import SolverOptions
from src.utils.logger import get_logger

log = get_logger(__name__)


def reconstruct_levels(phi: np.ndarray, grid: Grid, width: float) -> Tuple[NarrowBand, NarrowBand]:
    """Cell and node distance bands for the zero set of a cell level set."""
    field = ScalarField(grid, Centering.cell, phi)
    cell = reconstruct_sdf(field, width)
    node = reconstruct_sdf(field, width, target_centering=Centering.node)
    return cell, node


def _check_flips(dH: np.ndarray, mask: np.ndarray, what: str) -> None:
    outside = (dH != 0.0) & ~mask
    if outside.any():
        raise BandError(f"{int(outside.sum())} {what} points change side outside the extrapolation band")


@dataclass(frozen=True, eq=False)
class Projection:
    """psi of the latest step and the extrapolation of its jump, on the level-n node band."""

    psi: np.ndarray
    v_psi: JumpExtrapolation


def _restricted(band: NarrowBand, values: np.ndarray, mask: np.ndarray, q: int = 3) -> JumpExtrapolation:
    mask = mask & band.mask
    if not mask.any():
        raise BandError("combined extrapolation has no valid band points")
    return JumpExtrapolation(band, q, np.where(mask, values, 0.0), mask)


class SplicedStepper:
    """Surface-tension flow with sharp velocity-derivative and pressure jumps."""

    name = "spliced"

    def __init__(self, config: FlowConfig, grid: Grid, plan: StepPlan, options: Optional[SolverOptions] = None):
        self.config = config
        self.grid = grid
        self.plan = plan
        self.options = options
        self.last_projection: Optional[Projection] = None

    # ---------- initial data ----------

    def initial_state(self) -> FlowState:
        g, plan = self.grid, self.plan
        raw = self.config.shape.sample(g, Centering.cell)
        band_cell, band_node = reconstruct_levels(raw, g, plan.band_width)
        u = np.zeros((g.dim,) + g.shape(Centering.cell))
        jumps = tension_jumps(band_cell, band_node, u, plan.rho, plan.mu, plan.sigma, plan.curvature_limit)
        v_p = build_extrapolation(band_node, jumps.pressure, q=3)
        # lap p = 0 away from the interface with [p] = f_n across it
        p, stats = solve_neumann_nodal(-splice_correction(LAPLACIAN5, v_p), g, self.options)
        log.debug("initial pressure: %s iterations=%d", stats.solver, stats.iterations)
        return FlowState(
            grid=g,
            u=u,
            p=p.data,
            phi=band_cell.phi.copy(),
            band_cell=band_cell,
            band_node=band_node,
            clamped=jumps.clamped,
        )

    # ---------- one step ----------

    def advance(self, state: FlowState) -> FlowState:
        plan, g = self.plan, self.grid
        plan.check_cfl(state.u, g.h)
        try:
            return self._advance(state)
        except PlanError:
            raise
        except SpliceError as exc:
            raise StepError(state.step, exc) from exc

    def _advance(self, state: FlowState) -> FlowState:
        plan, g = self.plan, self.grid
        h, dim, dt = g.h, g.dim, plan.dt
        rho, mu = plan.rho, plan.mu
        u, p = state.u, state.p

        # 1-3: interface motion and reconstruction
        phi_next = state.phi - dt * eno_advect(u, state.phi, h)
        band_c0, band_n0 = state.band_cell, state.band_node
        if band_c0 is None or band_n0 is None:
            band_c0, band_n0 = reconstruct_levels(state.phi, g, plan.band_width)
        band_c1, band_n1 = reconstruct_levels(phi_next, g, plan.band_width)
        if plan.reinitializes(state.step):
            phi_next = band_c1.phi.copy()

        # 4-6: jumps and extrapolations at both levels
        lim = plan.curvature_limit
        j0 = tension_jumps(band_c0, band_n0, u, rho, mu, plan.sigma, lim)
        j1 = tension_jumps(band_c1, band_n1, u, rho, mu, plan.sigma, lim)
        vu0 = build_extrapolation(band_c0, j0.velocity, q=3)
        vp0 = build_extrapolation(band_n0, j0.pressure, q=3)
        vu1 = build_extrapolation(band_c1, j1.velocity, q=3)
        vp1 = build_extrapolation(band_n1, j1.pressure, q=3)

        H0c, H1c = band_c0.heaviside(), band_c1.heaviside()
        H0n, H1n = band_n0.heaviside(), band_n1.heaviside()
        _check_flips(H1c - H0c, vu1.mask, "cell")
        _check_flips(H1n - H0n, vp1.mask, "node")

        # 7: combined extrapolations on the level-n bands
        grad_vp = GRAD_NODE_TO_CELL.apply(vp1.values - vp0.values, h, dim)
        v_star = _restricted(
            band_c0,
            vu1.values + (dt / rho) * grad_vp,
            vu1.mask & GRAD_NODE_TO_CELL.reads_within(vp1.mask & vp0.mask),
        )
        v_psi = _restricted(band_n0, vp1.values - vp0.values, vp1.mask & vp0.mask)

        # 8a: u*
        adv = jeno_advect(u, u, vu0.values, band_c0.phi, h)
        grad_p = spliced_apply(GRAD_NODE_TO_CELL, p, vp0, H_out=H0c)
        coeff = mu * dt / rho
        rhs = u - dt * adv - (dt / rho) * grad_p + coeff * splice_correction(LAPLACIAN5, v_star)
        u_star, st_u = solve_helmholtz(rhs, coeff, g, self.options)

        # 8b: psi
        div_star = spliced_apply(DIV_CELL_TO_NODE, u_star, v_star, H_out=H0n)
        div_vu1 = DIV_CELL_TO_NODE.apply(vu1.values, h, dim)
        rhs_psi = (
            (rho / dt) * div_star
            + rho * div_vu1 * (H1n - H0n) / dt
            - splice_correction(LAPLACIAN5, v_psi)
        )
        psi, st_psi = solve_neumann_nodal(rhs_psi, g, self.options)
        self.last_projection = Projection(psi.data, v_psi)

        # 8c: update
        grad_psi = spliced_apply(GRAD_NODE_TO_CELL, psi.data, v_psi, H_out=H0c)
        u_next = u_star - (dt / rho) * grad_psi + vu1.values * (H1c - H0c)
        p_next = p + psi.data + vp1.values * (H1n - H0n)

        if not (np.all(np.isfinite(u_next)) and np.all(np.isfinite(p_next))):
            raise SpliceError("non-finite velocity or pressure after projection")

        log.debug(
            "step %d: t=%.5f helmholtz=%d neumann=%d max|u|=%.3e",
            state.step + 1, state.t + dt, st_u.iterations, st_psi.iterations, float(np.max(np.abs(u_next))),
        )
        return state.advanced(
            u=u_next,
            p=p_next,
            phi=phi_next,
            t=state.t + dt,
            step=state.step + 1,
            band_cell=band_c1,
            band_node=band_n1,
            clamped=state.clamped + j1.clamped,
        )


def step(state: FlowState, plan: StepPlan, config: FlowConfig, options: Optional[SolverOptions] = None) -> FlowState:
    """Advance a spliced flow state by one time step."""
    return SplicedStepper(config, state.grid, plan, options).advance(state)


__all__ = ["SplicedStepper", "Projection", "step", "reconstruct_levels"]
