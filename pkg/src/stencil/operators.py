# src/stencil/operators.py
from __future__ import annotations

"""Finite-difference operators
-----------------------------
Reusable linear operators with declared accuracy metadata. Each operator works
on plain arrays whose trailing `dim` axes are spatial (leading axes are
component axes) and on ScalarField / VectorField wrappers.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Union

import numpy as np

from src.grid.grid import Centering, Grid, ScalarField, VectorField
from src.stencil.kernels import AxisStencil, apply_axis, footprint_all, footprint_differs

Field = Union[ScalarField, VectorField]


# ---------- Base ----------

@dataclass(frozen=True)
class StencilOp:
    """
    Linear operator D^h with accuracy order p for derivatives of order r.
    `reach` is the centered footprint half-width in grid points (s = reach * h).
    The smoothness requirement is q = p + r - 1.
    """

    name: str
    order: int
    derivative: int
    reach: int
    centering_in: Optional[Centering] = None
    centering_out: Optional[Centering] = None

    @property
    def q(self) -> int:
        return self.order + self.derivative - 1

    def width(self, h: float) -> float:
        return self.reach * h

    def output_centering(self, centering: Centering) -> Centering:
        return self.centering_out or Centering(centering)

    # ---- array level ----

    def apply(self, a: np.ndarray, h: float, dim: int) -> np.ndarray:
        raise NotImplementedError

    def reads_within(self, mask: np.ndarray) -> np.ndarray:
        """Output points whose whole footprint lies inside `mask`."""
        raise NotImplementedError

    def crossing(self, H_in: np.ndarray, H_out: np.ndarray) -> np.ndarray:
        """Output points whose footprint holds a Heaviside value different from H at the output point."""
        raise NotImplementedError

    # ---- field level ----

    def __call__(self, field: Field) -> Field:
        g = field.grid
        out = self.apply(field.data, g.h, g.dim)
        mask = None if field.mask is None else self.reads_within(field.mask)
        return wrap(g, self.output_centering(field.centering), out, mask)


def wrap(grid: Grid, centering: Centering, out: np.ndarray, mask: Optional[np.ndarray] = None) -> Field:
    if out.ndim == grid.dim:
        return ScalarField(grid, centering, out, mask)
    if out.ndim == grid.dim + 1:
        return VectorField.from_arrays(grid, centering, list(out), mask)
    raise ValueError(f"cannot wrap array of rank {out.ndim} on a {grid.dim}D grid")


# ---------- Same-grid operators ----------

@dataclass(frozen=True)
class _AxisOp(StencilOp):
    @property
    def stencil(self) -> AxisStencil:
        return AxisStencil(self.derivative, self.order)

    def reads_within(self, mask: np.ndarray) -> np.ndarray:
        return footprint_all(mask, range(mask.ndim), self.stencil)

    def crossing(self, H_in: np.ndarray, H_out: np.ndarray) -> np.ndarray:
        return footprint_differs(H_in, range(H_in.ndim), self.stencil) | (H_in != H_out)


@dataclass(frozen=True)
class LaplacianOp(_AxisOp):
    def apply(self, a: np.ndarray, h: float, dim: int) -> np.ndarray:
        out = np.zeros(a.shape)
        for k in range(dim):
            out += apply_axis(a, -dim + k, self.stencil, h)
        return out


@dataclass(frozen=True)
class GradientOp(_AxisOp):
    def apply(self, a: np.ndarray, h: float, dim: int) -> np.ndarray:
        return np.stack([apply_axis(a, -dim + k, self.stencil, h) for k in range(dim)])


@dataclass(frozen=True)
class DivergenceOp(_AxisOp):
    def apply(self, a: np.ndarray, h: float, dim: int) -> np.ndarray:
        if a.shape[0] != dim:
            raise ValueError(f"divergence needs {dim} components, got {a.shape[0]}")
        out = np.zeros(a.shape[1:])
        for k in range(dim):
            out += apply_axis(a[k], -dim + k, self.stencil, h)
        return out


LAPLACIAN5 = LaplacianOp("laplacian5", order=2, derivative=2, reach=1)
LAPLACIAN9_4 = LaplacianOp("laplacian9_4", order=4, derivative=2, reach=2)
GRADIENT2 = GradientOp("gradient2", order=2, derivative=1, reach=1)
GRADIENT4 = GradientOp("gradient4", order=4, derivative=1, reach=2)
DIVERGENCE2 = DivergenceOp("divergence2", order=2, derivative=1, reach=1)
DIVERGENCE4 = DivergenceOp("divergence4", order=4, derivative=1, reach=2)

STENCILS: Dict[str, StencilOp] = {
    op.name: op for op in (LAPLACIAN5, LAPLACIAN9_4, GRADIENT2, GRADIENT4, DIVERGENCE2, DIVERGENCE4)
}


def laplacian_op(order: int) -> StencilOp:
    return {2: LAPLACIAN5, 4: LAPLACIAN9_4}[order]


def laplacian5(field: Field) -> Field:
    """Standard 5-point (7-point in 3D) Laplacian."""
    return LAPLACIAN5(field)


def laplacian9_4(field: Field) -> Field:
    """Fourth-order Laplacian, (-1, 16, -30, 16, -1)/12h^2 per axis."""
    return LAPLACIAN9_4(field)


def gradient2(field: ScalarField) -> VectorField:
    return GRADIENT2(field)


def gradient4(field: ScalarField) -> VectorField:
    return GRADIENT4(field)


def divergence2(field: VectorField) -> ScalarField:
    return DIVERGENCE2(field)


# ---------- Heaviside ----------

def heaviside(values):
    """H(z) = 1 for z >= 0, else 0. Accepts arrays, ScalarFields, or bands (anything with `.field`)."""
    src = getattr(values, "field", values)
    if isinstance(src, ScalarField):
        return ScalarField(src.grid, src.centering, (src.data >= 0.0).astype(float))
    return (np.asarray(src) >= 0.0).astype(float)


__all__ = [
    "StencilOp",
    "LaplacianOp",
    "GradientOp",
    "DivergenceOp",
    "LAPLACIAN5",
    "LAPLACIAN9_4",
    "GRADIENT2",
    "GRADIENT4",
    "DIVERGENCE2",
    "DIVERGENCE4",
    "STENCILS",
    "laplacian_op",
    "laplacian5",
    "laplacian9_4",
    "gradient2",
    "gradient4",
    "divergence2",
    "heaviside",
    "wrap",
]
