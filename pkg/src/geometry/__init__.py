# src/geometry/__init__.py
from src.geometry.band import NarrowBand, band_from_sdf, band_from_shape
from src.geometry.curvature import clamp_curvature, curvature, ellipse_curvature
from src.geometry.reconstruct import ReconstructionStats, reconstruct_sdf
from src.geometry.shapes import (
    Circle,
    Ellipse,
    Ellipsoid,
    FieldShape,
    Shape,
    ShapeKind,
    Stadium,
    TwoCircles,
    exact_sdf,
    shape_from_config,
)

__all__ = [
    "NarrowBand",
    "band_from_sdf",
    "band_from_shape",
    "curvature",
    "clamp_curvature",
    "ellipse_curvature",
    "ReconstructionStats",
    "reconstruct_sdf",
    "Circle",
    "Ellipse",
    "Ellipsoid",
    "FieldShape",
    "Shape",
    "ShapeKind",
    "Stadium",
    "TwoCircles",
    "exact_sdf",
    "shape_from_config",
]
