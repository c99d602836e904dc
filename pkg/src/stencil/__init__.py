# src/stencil/__init__.py
from src.stencil.operators import (
    DIVERGENCE2,
    GRADIENT2,
    GRADIENT4,
    LAPLACIAN5,
    LAPLACIAN9_4,
    STENCILS,
    StencilOp,
    divergence2,
    gradient2,
    gradient4,
    heaviside,
    laplacian5,
    laplacian9_4,
)
from src.stencil.staggered import DIV_CELL_TO_NODE, GRAD_NODE_TO_CELL, div_cell_to_node, grad_node_to_cell

__all__ = [
    "StencilOp",
    "STENCILS",
    "LAPLACIAN5",
    "LAPLACIAN9_4",
    "GRADIENT2",
    "GRADIENT4",
    "DIVERGENCE2",
    "GRAD_NODE_TO_CELL",
    "DIV_CELL_TO_NODE",
    "laplacian5",
    "laplacian9_4",
    "gradient2",
    "gradient4",
    "divergence2",
    "div_cell_to_node",
    "grad_node_to_cell",
    "heaviside",
]
