# src/core/errors.py
from __future__ import annotations

"""Domain exceptions
-------------------
Every failure raised by the numerical layers derives from SpliceError so the
engine can report it uniformly; the mixins keep `except ValueError` working
for callers that validate inputs.
"""

from typing import Optional, Sequence


class SpliceError(RuntimeError):
    """Base class for splice-bench failures."""


class GridError(SpliceError, ValueError):
    """Invalid grid, centering mismatch, empty mask or bad refinement pair."""


class BandError(SpliceError):
    """Narrow band too thin for an operation, or a read outside a declared band."""


class GeometryError(SpliceError):
    """Interface reconstruction failed (no sign change, too many fallbacks)."""


class OrderError(SpliceError, ValueError):
    """Jump extrapolation order too low for the operator it is spliced into."""


class PlanError(SpliceError, ValueError):
    """Time-step plan violates the advective or capillary stability bound."""


class SolverError(SpliceError):
    """Linear solver did not reach its tolerance."""

    def __init__(self, message: str, residual_history: Optional[Sequence[float]] = None):
        self.residual_history = list(residual_history or [])
        if self.residual_history:
            tail = ", ".join(f"{r:.3e}" for r in self.residual_history[-5:])
            message = f"{message} (last residuals: {tail})"
        super().__init__(message)


class StepError(SpliceError):
    """Failure inside a Navier-Stokes step; carries the step index."""

    def __init__(self, step_index: int, cause: BaseException):
        self.step_index = step_index
        self.cause = cause
        super().__init__(f"step {step_index} failed: {cause.__class__.__name__}: {cause}")


class ExperimentError(SpliceError, KeyError):
    """Unknown experiment id."""

    def __init__(self, experiment_id: str, known: Sequence[str]):
        self.experiment_id = experiment_id
        self.known = sorted(known)
        super().__init__(f"unknown experiment '{experiment_id}'; known ids: {', '.join(self.known)}")

    def __str__(self) -> str:
        return self.args[0]


__all__ = [
    "SpliceError",
    "GridError",
    "BandError",
    "GeometryError",
    "OrderError",
    "PlanError",
    "SolverError",
    "StepError",
    "ExperimentError",
]
