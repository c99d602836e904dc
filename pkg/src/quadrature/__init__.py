# src/quadrature/__init__.py
from src.quadrature.integrate import (
    SurfaceIntegrand,
    delta_field,
    enclosed_volume,
    integrate_surface,
    surface_area,
)

__all__ = ["SurfaceIntegrand", "delta_field", "enclosed_volume", "integrate_surface", "surface_area"]
