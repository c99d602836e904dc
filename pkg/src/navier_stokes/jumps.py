# src/navier_stokes/jumps.py
from __future__ import annotations

"""Surface-tension jump conditions
---------------------------------
With the normal force density f_n = -sigma kappa and no tangential force:

  velocity:  [u] = 0, [d_n u] = 0,
             [lap u]     = (1/mu)(grad f_n - (grad f_n . n) n)
             [d_n lap u] = -(div g_lap) n - g_lap . grad n
  pressure:  [p] = f_n, [d_n p] = 0, [lap p] = 0,
             [d_n lap p] = -2 rho n . grad u . g_lap

kappa and f_n live on nodes (from the node distance), n at cells is the
second-order gradient of the cell distance.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.geometry.band import NarrowBand
from src.geometry.curvature import clamp_curvature, curvature
from src.splice.jumps import JumpSet
from src.stencil.operators import DIVERGENCE2, GRADIENT2
from src.stencil.staggered import DIV_CELL_TO_NODE, GRAD_NODE_TO_CELL, cell_to_node_average, grad_cell_to_node


@dataclass(frozen=True, eq=False)
class TensionJumps:
    velocity: JumpSet
    pressure: JumpSet
    kappa: np.ndarray  # nodes, zero off its mask
    kappa_mask: np.ndarray
    clamped: int = 0


def tension_jumps(
    band_cell: NarrowBand,
    band_node: NarrowBand,
    u: np.ndarray,
    rho: float,
    mu: float,
    sigma: float,
    curvature_limit: Optional[float] = None,
) -> TensionJumps:
    """Jump data for velocity (cells) and pressure (nodes) at one time level."""
    h, dim = band_cell.h, band_cell.grid.dim

    kappa = curvature(band_node)
    clamped = 0
    if curvature_limit is not None:
        kappa, clamped = clamp_curvature(kappa, curvature_limit)
    k_mask = kappa.valid()
    f_n = np.where(k_mask, -sigma * kappa.data, 0.0)

    # velocity jumps on cells
    n_cell = GRADIENT2.apply(band_cell.phi, h, dim)
    n_mask = GRADIENT2.reads_within(band_cell.mask)
    grad_f = GRAD_NODE_TO_CELL.apply(f_n, h, dim)
    lap_mask = GRAD_NODE_TO_CELL.reads_within(k_mask) & n_mask
    normal_part = np.sum(grad_f * n_cell, axis=0)
    g_lap = np.where(lap_mask, (grad_f - normal_part * n_cell) / mu, 0.0)

    dn_mask = DIVERGENCE2.reads_within(lap_mask) & GRADIENT2.reads_within(n_mask)
    div_g = DIVERGENCE2.apply(g_lap, h, dim)
    grad_n = GRADIENT2.apply(n_cell, h, dim)  # grad_n[i, j] = d_i n_j
    g_dot_grad_n = np.einsum("i...,ij...->j...", g_lap, grad_n)
    g_dnlap = np.where(dn_mask, -div_g * n_cell - g_dot_grad_n, 0.0)

    zeros_u = np.zeros(u.shape)
    velocity = JumpSet(
        band_cell,
        zeros_u,
        zeros_u.copy(),
        g_lap,
        g_dnlap,
        masks=(None, None, lap_mask, dn_mask),
    )

    # pressure jumps on nodes
    n_node = GRADIENT2.apply(band_node.phi, h, dim)
    n_node_mask = GRADIENT2.reads_within(band_node.mask)
    g_lap_node = cell_to_node_average(g_lap, dim)
    lap_node_mask = DIV_CELL_TO_NODE.reads_within(lap_mask)
    grad_u = grad_cell_to_node(u, h, dim)  # grad_u[i, j] = d_i u_j
    n_grad_u_g = np.einsum("i...,ij...,j...->...", n_node, grad_u, g_lap_node)
    p_dn_mask = n_node_mask & lap_node_mask
    zeros_p = np.zeros(band_node.phi.shape)
    pressure = JumpSet(
        band_node,
        f_n,
        zeros_p,
        zeros_p.copy(),
        np.where(p_dn_mask, -2.0 * rho * n_grad_u_g, 0.0),
        masks=(k_mask, None, None, p_dn_mask),
    )
    return TensionJumps(velocity, pressure, kappa.data, k_mask, clamped)


def surface_tension_jumps(state, plan) -> TensionJumps:
    """Jumps at the state's own time level, from its cached reconstructions."""
    return tension_jumps(
        state.band_cell,
        state.band_node,
        state.u,
        plan.rho,
        plan.mu,
        plan.sigma,
        plan.curvature_limit,
    )


__all__ = ["TensionJumps", "tension_jumps", "surface_tension_jumps"]
