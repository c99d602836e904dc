# src/navier_stokes/__init__.py
from src.navier_stokes.advection import eno_advect, eno_derivative, jeno_advect
from src.navier_stokes.baseline import SmoothedDeltaStepper, smoothed_delta, tension_force
from src.navier_stokes.jumps import TensionJumps, surface_tension_jumps, tension_jumps
from src.navier_stokes.runner import (
    FlowRun,
    Snapshot,
    between_grid_errors,
    flow_volume,
    laplace_balance_residual,
    make_stepper,
    pressure_slice,
    run,
    volume_error,
    volume_series,
    write_pressure_slice,
)
from src.navier_stokes.state import FlowConfig, FlowState, StepPlan
from src.navier_stokes.stepper import SplicedStepper, reconstruct_levels, step

__all__ = [
    "FlowConfig",
    "FlowState",
    "StepPlan",
    "eno_derivative",
    "eno_advect",
    "jeno_advect",
    "TensionJumps",
    "tension_jumps",
    "surface_tension_jumps",
    "SplicedStepper",
    "SmoothedDeltaStepper",
    "smoothed_delta",
    "tension_force",
    "reconstruct_levels",
    "step",
    "run",
    "FlowRun",
    "Snapshot",
    "flow_volume",
    "make_stepper",
    "volume_series",
    "volume_error",
    "between_grid_errors",
    "pressure_slice",
    "write_pressure_slice",
    "laplace_balance_residual",
]
