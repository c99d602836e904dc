# src/navier_stokes/state.py
from __future__ import annotations

"""Flow state and time-step plan
-------------------------------
Velocity lives at cell centers, pressure at nodes, the level set at cells.
The domain is the unit square with no-slip walls.
"""

import math
from dataclasses import dataclass, replace
from typing import Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat

from src.core.errors import PlanError
from src.geometry.band import NarrowBand
from src.geometry.shapes import Shape
from src.grid.grid import Centering, Grid, make_grid


class FlowConfig(BaseModel):
    """Physical and numerical parameters of one two-phase surface-tension run."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    shape: Shape
    rho: PositiveFloat = 1.0
    mu: PositiveFloat = 0.1
    sigma: float = Field(default=1.0, ge=0.0)
    final_time: PositiveFloat = 0.125
    dt_rule: Union[Literal["h2"], PositiveFloat] = "h2"
    reinit_period: int = Field(default=16, ge=1)
    band_cells: float = Field(default=16.0, ge=12.0)
    record_count: int = Field(default=8, ge=1)
    volume_every: int = Field(default=16, ge=1)
    slice_x: float = 0.5
    lower: float = 0.0
    upper: float = 1.0

    def grid(self, n: int) -> Grid:
        return make_grid(2, n, self.lower, self.upper)


@dataclass(frozen=True)
class StepPlan:
    dt: float
    steps: int
    band_width: float
    reinit_period: int
    rho: float
    mu: float
    sigma: float
    curvature_limit: Optional[float] = None

    @classmethod
    def for_grid(cls, config: FlowConfig, grid: Grid, clamp_curvature: bool = True) -> "StepPlan":
        h = grid.h
        dt = h * h if config.dt_rule == "h2" else float(config.dt_rule)
        steps = max(1, int(math.ceil(config.final_time / dt - 1e-9)))
        plan = cls(
            dt=config.final_time / steps,
            steps=steps,
            band_width=config.band_cells * h,
            reinit_period=config.reinit_period,
            rho=config.rho,
            mu=config.mu,
            sigma=config.sigma,
            curvature_limit=0.5 / h if clamp_curvature else None,
        )
        plan.check_capillary(h)
        return plan

    def capillary_bound(self, h: float) -> float:
        if self.sigma == 0.0:
            return math.inf
        return math.sqrt(self.rho * h**3 / (2.0 * math.pi * self.sigma))

    def check_capillary(self, h: float) -> None:
        bound = self.capillary_bound(h)
        if self.dt > bound:
            raise PlanError(f"dt={self.dt:.3e} exceeds the capillary bound {bound:.3e} at h={h:.3e}")

    def check_cfl(self, u: np.ndarray, h: float) -> None:
        speed = float(np.max(np.abs(u))) if u.size else 0.0
        if speed * self.dt > 0.5 * h:
            raise PlanError(f"CFL violated: max|u| dt = {speed * self.dt:.3e} > h/2 = {0.5 * h:.3e}")

    def reinitializes(self, step_index: int) -> bool:
        return (step_index + 1) % self.reinit_period == 0


@dataclass(frozen=True, eq=False)
class FlowState:
    grid: Grid
    u: np.ndarray  # (2, n, n) cells
    p: np.ndarray  # (n+1, n+1) nodes
    phi: np.ndarray  # (n, n) cells, clamped to +/- band width
    t: float = 0.0
    step: int = 0
    band_cell: Optional[NarrowBand] = None
    band_node: Optional[NarrowBand] = None
    clamped: int = 0

    def __post_init__(self) -> None:
        cell, node = self.grid.shape(Centering.cell), self.grid.shape(Centering.node)
        if self.u.shape != (self.grid.dim,) + cell:
            raise PlanError(f"velocity shape {self.u.shape} does not match cells {cell}")
        if self.p.shape != node:
            raise PlanError(f"pressure shape {self.p.shape} does not match nodes {node}")
        if self.phi.shape != cell:
            raise PlanError(f"level set shape {self.phi.shape} does not match cells {cell}")

    @property
    def h(self) -> float:
        return self.grid.h

    def advanced(self, **changes) -> "FlowState":
        return replace(self, **changes)


__all__ = ["FlowConfig", "StepPlan", "FlowState"]
