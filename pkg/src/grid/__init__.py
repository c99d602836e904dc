# src/grid/__init__.py
from src.grid.grid import Centering, Grid, RefinementPair, ScalarField, VectorField, make_grid
from src.grid.norms import interpolate_to, l2_norm, linf_norm, restrict_compare

__all__ = [
    "Centering",
    "Grid",
    "RefinementPair",
    "ScalarField",
    "VectorField",
    "make_grid",
    "linf_norm",
    "l2_norm",
    "restrict_compare",
    "interpolate_to",
]
