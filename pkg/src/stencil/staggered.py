# src/stencil/staggered.py
from __future__ import annotations

"""Cell/node staggered operators
-------------------------------
Velocity lives at cell centers, pressure at nodes. The node-to-cell gradient
and the cell-to-node divergence are built from the same edge differences
averaged over the transverse corners, with cells outside the domain read as
zero, so that <grad q, v>_cell = -<q, div v>_node holds exactly.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

from src.grid.grid import Centering, ScalarField, VectorField
from src.stencil.operators import StencilOp


def _pair_average(a: np.ndarray, axis: int) -> np.ndarray:
    lo = np.take(a, np.arange(a.shape[axis] - 1), axis=axis)
    hi = np.take(a, np.arange(1, a.shape[axis]), axis=axis)
    return 0.5 * (lo + hi)


def _pad_spatial(a: np.ndarray, dim: int, **kwargs) -> np.ndarray:
    width = [(0, 0)] * (a.ndim - dim) + [(1, 1)] * dim
    return np.pad(a, width, **kwargs)


def _corner_slices(dim: int, size: int):
    for corner in product((0, 1), repeat=dim):
        yield tuple(slice(c, c + size) for c in corner)


# ---------- Node -> cell gradient ----------

@dataclass(frozen=True)
class NodeToCellGradient(StencilOp):
    def apply(self, q: np.ndarray, h: float, dim: int) -> np.ndarray:
        comps = []
        for k in range(dim):
            ax = q.ndim - dim + k
            d = np.diff(q, axis=ax) / h
            for o in range(dim):
                if o != k:
                    d = _pair_average(d, q.ndim - dim + o)
            comps.append(d)
        return np.stack(comps)

    def reads_within(self, mask: np.ndarray) -> np.ndarray:
        ok = mask
        for ax in range(mask.ndim):
            ok = np.take(ok, np.arange(ok.shape[ax] - 1), axis=ax) & np.take(ok, np.arange(1, ok.shape[ax]), axis=ax)
        return ok

    def crossing(self, H_in: np.ndarray, H_out: np.ndarray) -> np.ndarray:
        out = np.zeros(H_out.shape, dtype=bool)
        for sl in _corner_slices(H_out.ndim, H_out.shape[0]):
            out |= H_in[sl] != H_out
        return out


# ---------- Cell -> node divergence ----------

@dataclass(frozen=True)
class CellToNodeDivergence(StencilOp):
    def apply(self, v: np.ndarray, h: float, dim: int) -> np.ndarray:
        if v.shape[0] != dim:
            raise ValueError(f"divergence needs {dim} components, got {v.shape[0]}")
        out = None
        for k in range(dim):
            p = _pad_spatial(v[k], dim, mode="constant")
            d = np.diff(p, axis=p.ndim - dim + k) / h
            for o in range(dim):
                if o != k:
                    d = _pair_average(d, p.ndim - dim + o)
            out = d if out is None else out + d
        return out

    def reads_within(self, mask: np.ndarray) -> np.ndarray:
        ok = np.pad(mask, 1, constant_values=True)
        for ax in range(mask.ndim):
            ok = np.take(ok, np.arange(ok.shape[ax] - 1), axis=ax) & np.take(ok, np.arange(1, ok.shape[ax]), axis=ax)
        return ok

    def crossing(self, H_in: np.ndarray, H_out: np.ndarray) -> np.ndarray:
        padded = np.pad(H_in, 1, mode="edge")
        out = np.zeros(H_out.shape, dtype=bool)
        for sl in _corner_slices(H_out.ndim, H_out.shape[0]):
            out |= padded[sl] != H_out
        return out


GRAD_NODE_TO_CELL = NodeToCellGradient(
    "grad_node_to_cell", order=2, derivative=1, reach=1,
    centering_in=Centering.node, centering_out=Centering.cell,
)
DIV_CELL_TO_NODE = CellToNodeDivergence(
    "div_cell_to_node", order=2, derivative=1, reach=1,
    centering_in=Centering.cell, centering_out=Centering.node,
)


def grad_node_to_cell(field: ScalarField) -> VectorField:
    if field.centering != Centering.node:
        raise ValueError("grad_node_to_cell expects a node field")
    return GRAD_NODE_TO_CELL(field)


def div_cell_to_node(field: VectorField) -> ScalarField:
    if field.centering != Centering.cell:
        raise ValueError("div_cell_to_node expects a cell field")
    return DIV_CELL_TO_NODE(field)


# ---------- Interpolation helpers ----------

def cell_to_node_average(a: np.ndarray, dim: int) -> np.ndarray:
    """Average of the cells around each node; boundary nodes average the cells that exist."""
    p = _pad_spatial(a, dim, mode="edge")
    for k in range(dim):
        p = _pair_average(p, p.ndim - dim + k)
    return p


def grad_cell_to_node(u: np.ndarray, h: float, dim: int) -> np.ndarray:
    """Gradient of cell data at nodes: result[i] = d/dx_i, component axes preserved."""
    p = _pad_spatial(u, dim, mode="edge")
    comps = []
    for k in range(dim):
        d = np.diff(p, axis=p.ndim - dim + k) / h
        for o in range(dim):
            if o != k:
                d = _pair_average(d, p.ndim - dim + o)
        comps.append(d)
    return np.stack(comps)


__all__ = [
    "NodeToCellGradient",
    "CellToNodeDivergence",
    "GRAD_NODE_TO_CELL",
    "DIV_CELL_TO_NODE",
    "grad_node_to_cell",
    "div_cell_to_node",
    "cell_to_node_average",
    "grad_cell_to_node",
]
