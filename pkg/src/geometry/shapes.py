# src/geometry/shapes.py
from __future__ import annotations

"""Implicit shapes
----------------
Pydantic shape models (discriminated by `kind`) readable from experiment YAML.
Convention: the level set and the signed distance are positive inside the
interface, so the inward normal is grad(phi).

Each shape exposes:
  - level_set(points): the input level set handed to reconstruction
  - exact_sdf(points): the true signed distance (closed form or closest-point solve)
  - volume() / perimeter(): closed forms where they exist, else None
"""

import math
from enum import Enum
from pathlib import Path
from typing import Annotated, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, TypeAdapter, field_validator

from src.core.errors import GeometryError
from src.grid.grid import Centering, Grid


# ---------- Enums ----------

class ShapeKind(str, Enum):
    circle = "circle"
    ellipse = "ellipse"
    ellipsoid = "ellipsoid"
    stadium = "stadium"
    two_circles = "two_circles"
    field = "field"


# ---------- Base ----------

class _ShapeBase(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    center: Tuple[float, ...] = (0.0, 0.0)

    @property
    def dim(self) -> int:
        return len(self.center)

    def _rel(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[-1] != self.dim:
            raise GeometryError(f"{self.__class__.__name__} is {self.dim}D, got points of dim {pts.shape[-1]}")
        return pts - np.asarray(self.center)

    def level_set(self, points: np.ndarray) -> np.ndarray:
        return self.exact_sdf(points)

    def exact_sdf(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def volume(self) -> Optional[float]:
        return None

    def perimeter(self) -> Optional[float]:
        return None

    def sample(self, grid: Grid, centering: Centering, exact: bool = False) -> np.ndarray:
        """Dense grid array of the level set (or the exact SDF)."""
        pts = grid.points(centering)
        vals = self.exact_sdf(pts) if exact else self.level_set(pts)
        return vals.reshape(grid.shape(centering))


# ---------- Circle / sphere ----------

class Circle(_ShapeBase):
    kind: Literal["circle"] = "circle"
    radius: float = Field(default=0.5, gt=0.0)

    def exact_sdf(self, points: np.ndarray) -> np.ndarray:
        return self.radius - np.linalg.norm(self._rel(points), axis=-1)

    def volume(self) -> float:
        if self.dim == 2:
            return math.pi * self.radius**2
        return 4.0 / 3.0 * math.pi * self.radius**3

    def perimeter(self) -> float:
        if self.dim == 2:
            return 2.0 * math.pi * self.radius
        return 4.0 * math.pi * self.radius**2


# ---------- Ellipse / ellipsoid ----------

def _distance_regular(y: np.ndarray, e: np.ndarray, max_iter: int = 200) -> np.ndarray:
    """
    Distance from first-orthant points y (last coordinate > 0) to the ellipsoid with
    semi-axes e (descending). Newton on the convex decreasing secular function
    F(mu) = sum (e_i y_i / (mu + d_i))^2 - 1 with d_i = e_i^2 - e_last^2, started left of the root.
    """
    d = e**2 - e[-1] ** 2
    ey = e * y
    mu = ey[:, -1].copy()
    active = np.ones(len(y), dtype=bool)
    for _ in range(max_iter):
        if not active.any():
            break
        m = mu[active][:, None]
        ratio = ey[active] / (m + d)
        f = np.sum(ratio**2, axis=1) - 1.0
        df = -2.0 * np.sum(ratio**2 / (m + d), axis=1)
        step = -f / df
        mu[active] += step
        done = np.abs(step) <= 1e-16 * np.maximum(mu[active], 1e-300)
        idx = np.flatnonzero(active)
        active[idx[done | (f <= 0.0)]] = False
    x = e**2 * y / (mu[:, None] + d)
    return np.linalg.norm(x - y, axis=1)


def _distance_sorted(y: np.ndarray, e: np.ndarray) -> np.ndarray:
    if len(e) == 1:
        return np.abs(y[:, 0] - e[0])
    out = np.empty(len(y))
    regular = y[:, -1] > 0.0
    if regular.any():
        out[regular] = _distance_regular(y[regular], e)
    degenerate = ~regular
    if degenerate.any():
        yd = y[degenerate]
        denom = e[:-1] ** 2 - e[-1] ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            xs = np.where(denom > 0.0, e[:-1] ** 2 * yd[:, :-1] / denom, np.inf)
            s = np.sum((xs / e[:-1]) ** 2, axis=1)
        interior = s < 1.0
        res = np.empty(len(yd))
        if interior.any():
            xl = e[-1] * np.sqrt(1.0 - s[interior])
            res[interior] = np.sqrt(np.sum((xs[interior] - yd[interior, :-1]) ** 2, axis=1) + xl**2)
        if (~interior).any():
            res[~interior] = _distance_sorted(yd[~interior, :-1], e[:-1])
        out[degenerate] = res
    return out


def ellipsoid_sdf(points: np.ndarray, center: np.ndarray, radii: np.ndarray) -> np.ndarray:
    p = np.atleast_2d(points) - center
    order = np.argsort(-radii, kind="stable")
    e = radii[order]
    y = np.abs(p[:, order])
    dist = _distance_sorted(y, e)
    inside = np.sum((p / radii) ** 2, axis=1) <= 1.0
    return np.where(inside, dist, -dist)


class Ellipse(_ShapeBase):
    kind: Literal["ellipse"] = "ellipse"
    radii: Tuple[float, float] = (0.7, 0.3)

    @field_validator("radii")
    @classmethod
    def _positive(cls, v):
        if min(v) <= 0:
            raise ValueError("radii must be positive")
        return v

    def level_set(self, points: np.ndarray) -> np.ndarray:
        # quadratic level set rescaled so |grad| is O(1) near the interface
        r = np.asarray(self.radii)
        q = np.sum((self._rel(points) / r) ** 2, axis=-1)
        return (1.0 - q) * (0.5 * float(np.min(r)))

    def exact_sdf(self, points: np.ndarray) -> np.ndarray:
        return ellipsoid_sdf(np.asarray(points, dtype=float), np.asarray(self.center), np.asarray(self.radii))

    def volume(self) -> float:
        return math.pi * float(np.prod(self.radii))


class Ellipsoid(Ellipse):
    kind: Literal["ellipsoid"] = "ellipsoid"  # type: ignore[assignment]
    center: Tuple[float, ...] = (0.0, 0.0, 0.0)
    radii: Tuple[float, float, float] = (0.7, 0.3, 0.5)  # type: ignore[assignment]

    def volume(self) -> float:
        return 4.0 / 3.0 * math.pi * float(np.prod(self.radii))


# ---------- Stadium (C1) ----------

class Stadium(_ShapeBase):
    """Capsule around the y-axis segment of half-length `half_length`."""

    kind: Literal["stadium"] = "stadium"
    half_length: float = Field(default=0.5, gt=0.0)
    radius: float = Field(default=0.2, gt=0.0)

    def exact_sdf(self, points: np.ndarray) -> np.ndarray:
        p = self._rel(points)
        t = np.clip(p[:, 1], -self.half_length, self.half_length)
        return self.radius - np.hypot(p[:, 0], p[:, 1] - t)

    def volume(self) -> float:
        return 4.0 * self.half_length * self.radius + math.pi * self.radius**2

    def perimeter(self) -> float:
        return 4.0 * self.half_length + 2.0 * math.pi * self.radius


# ---------- Union of two circles (C0) ----------

class TwoCircles(_ShapeBase):
    """Union of two equal discs centered at center +/- (offset, 0)."""

    kind: Literal["two_circles"] = "two_circles"
    radius: float = Field(default=0.5, gt=0.0)
    offset: float = Field(default=math.sqrt(2.0) / 4.0, gt=0.0)

    @field_validator("offset")
    @classmethod
    def _overlapping(cls, v, info):
        r = info.data.get("radius", 0.5)
        if v >= r:
            raise ValueError("discs must overlap (offset < radius)")
        return v

    def _centers(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.array([-self.offset, 0.0]), np.array([self.offset, 0.0])

    def level_set(self, points: np.ndarray) -> np.ndarray:
        # distance to the circle on the same side of the symmetry axis
        p = self._rel(points)
        cx = np.where(p[:, 0] >= 0.0, self.offset, -self.offset)
        return self.radius - np.hypot(p[:, 0] - cx, p[:, 1])

    def exact_sdf(self, points: np.ndarray) -> np.ndarray:
        p = self._rel(points)
        c1, c2 = self._centers()
        r = self.radius
        cands = []
        for ci, cj in ((c1, c2), (c2, c1)):
            rel = p - ci
            di = np.linalg.norm(rel, axis=1)
            safe = np.where(di > 0.0, di, 1.0)
            direction = np.where(di[:, None] > 0.0, rel / safe[:, None], np.array([1.0, 0.0]))
            cp = ci + r * direction
            on_boundary = np.linalg.norm(cp - cj, axis=1) >= r
            cands.append(np.where(on_boundary, np.abs(di - r), np.inf))
        yc = math.sqrt(r * r - self.offset**2)
        for corner in (np.array([0.0, yc]), np.array([0.0, -yc])):
            cands.append(np.linalg.norm(p - corner, axis=1))
        dist = np.min(np.stack(cands), axis=0)
        inside = (np.linalg.norm(p - c1, axis=1) <= r) | (np.linalg.norm(p - c2, axis=1) <= r)
        return np.where(inside, dist, -dist)

    def volume(self) -> float:
        r, d = self.radius, 2.0 * self.offset
        lens = 2.0 * r * r * math.acos(d / (2.0 * r)) - 0.5 * d * math.sqrt(4.0 * r * r - d * d)
        return 2.0 * math.pi * r * r - lens

    def perimeter(self) -> float:
        theta = math.acos(self.offset / self.radius)
        return 2.0 * (2.0 * math.pi * self.radius - 2.0 * self.radius * theta)


# ---------- Raw level-set field ----------

class FieldShape(_ShapeBase):
    """Level set read from a dumped grid field; no closed-form distance."""

    kind: Literal["field"] = "field"
    path: Path
    _cache = PrivateAttr(default=None)

    def level_set(self, points: np.ndarray) -> np.ndarray:
        from src.grid.io import load_field
        from src.grid.norms import interpolate_to

        if self._cache is None:
            self._cache = load_field(self.path)
        return interpolate_to(self._cache, np.asarray(points, dtype=float), method="cubic")

    @property
    def dim(self) -> int:
        return len(self.center)

    def exact_sdf(self, points: np.ndarray) -> np.ndarray:
        raise GeometryError("a raw level-set field has no closed-form signed distance; reconstruct it")


Shape = Annotated[
    Union[Circle, Ellipse, Ellipsoid, Stadium, TwoCircles, FieldShape],
    Field(discriminator="kind"),
]

_SHAPE_ADAPTER = TypeAdapter(Shape)


def shape_from_config(data: dict) -> _ShapeBase:
    return _SHAPE_ADAPTER.validate_python(data)


def exact_sdf(shape: _ShapeBase, point) -> np.ndarray | float:
    """Signed distance of one point (returns float) or of an (N, dim) array."""
    pts = np.asarray(point, dtype=float)
    out = shape.exact_sdf(np.atleast_2d(pts))
    return float(out[0]) if pts.ndim == 1 else out


__all__ = [
    "ShapeKind",
    "Circle",
    "Ellipse",
    "Ellipsoid",
    "Stadium",
    "TwoCircles",
    "FieldShape",
    "Shape",
    "shape_from_config",
    "exact_sdf",
    "ellipsoid_sdf",
]
