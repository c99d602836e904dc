# src/grid/grid.py
from __future__ import annotations

"""Uniform Cartesian grids and fields
-----------------------------------
Grids are square (equal spacing on every axis) in 2D or 3D. Fields carry their
own centering; cell index i sits at origin + (i + 1/2)h and node index i at
origin + ih. Arrays are indexed [i, j(, k)] with axis 0 = x.
"""

from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Callable, Iterable, Optional, Sequence, Tuple

import numpy as np

from src.core.errors import GridError


# ---------- Enums ----------

class Centering(str, Enum):
    cell = "cell"
    node = "node"


# ---------- Grid ----------

@dataclass(frozen=True)
class Grid:
    dim: int
    n: int
    h: float
    origin: Tuple[float, ...]

    def __post_init__(self) -> None:
        if self.dim not in (2, 3):
            raise GridError(f"dim must be 2 or 3, got {self.dim}")
        if self.n < 4:
            raise GridError(f"n must be >= 4, got {self.n}")
        if not self.h > 0:
            raise GridError(f"h must be positive, got {self.h}")
        if len(self.origin) != self.dim:
            raise GridError(f"origin has {len(self.origin)} coordinates for dim={self.dim}")

    # ---- shape / coordinates ----

    def shape(self, centering: Centering) -> Tuple[int, ...]:
        m = self.n if Centering(centering) == Centering.cell else self.n + 1
        return (m,) * self.dim

    def size(self, centering: Centering) -> int:
        return int(np.prod(self.shape(centering)))

    @property
    def upper(self) -> Tuple[float, ...]:
        return tuple(o + self.n * self.h for o in self.origin)

    @property
    def extent(self) -> float:
        return self.n * self.h

    def axis_coords(self, axis: int, centering: Centering) -> np.ndarray:
        offset = 0.5 if Centering(centering) == Centering.cell else 0.0
        m = self.shape(centering)[axis]
        return self.origin[axis] + (np.arange(m) + offset) * self.h

    def coords(self, centering: Centering) -> Tuple[np.ndarray, ...]:
        axes = [self.axis_coords(a, centering) for a in range(self.dim)]
        return tuple(np.meshgrid(*axes, indexing="ij"))

    def points(self, centering: Centering, mask: Optional[np.ndarray] = None) -> np.ndarray:
        """(N, dim) coordinates, optionally restricted to a mask (C order)."""
        cs = self.coords(centering)
        if mask is None:
            return np.stack([c.ravel() for c in cs], axis=-1)
        return np.stack([c[mask] for c in cs], axis=-1)

    def index_to_coord(self, index: Sequence[int], centering: Centering) -> Tuple[float, ...]:
        offset = 0.5 if Centering(centering) == Centering.cell else 0.0
        return tuple(self.origin[a] + (int(index[a]) + offset) * self.h for a in range(self.dim))

    def coord_to_index(self, coord: Sequence[float], centering: Centering) -> Tuple[int, ...]:
        offset = 0.5 if Centering(centering) == Centering.cell else 0.0
        return tuple(
            int(round((float(coord[a]) - self.origin[a]) / self.h - offset)) for a in range(self.dim)
        )

    # ---- refinement ----

    def coarsen(self) -> "Grid":
        if self.n % 2:
            raise GridError(f"cannot coarsen odd n={self.n}")
        return Grid(self.dim, self.n // 2, 2.0 * self.h, self.origin)

    def refine(self) -> "Grid":
        return Grid(self.dim, 2 * self.n, 0.5 * self.h, self.origin)

    def same_domain(self, other: "Grid") -> bool:
        return (
            self.dim == other.dim
            and np.allclose(self.origin, other.origin, rtol=0.0, atol=1e-12)
            and abs(self.extent - other.extent) <= 1e-12 * max(1.0, self.extent)
        )


def make_grid(
    dim: int,
    n: int,
    lower: float | Sequence[float],
    upper: float | Sequence[float],
) -> Grid:
    """Square grid with n cells per axis on [lower, upper]^dim."""
    lo = np.broadcast_to(np.asarray(lower, dtype=float), (dim,))
    hi = np.broadcast_to(np.asarray(upper, dtype=float), (dim,))
    if np.any(hi <= lo):
        raise GridError(f"upper must exceed lower componentwise: {lo.tolist()} vs {hi.tolist()}")
    extents = hi - lo
    if not np.allclose(extents, extents[0], rtol=1e-12, atol=0.0):
        raise GridError(f"non-square domain {extents.tolist()}: anisotropic spacing unsupported")
    return Grid(dim=int(dim), n=int(n), h=float(extents[0]) / int(n), origin=tuple(float(x) for x in lo))


# ---------- Fields ----------

@dataclass(frozen=True, eq=False)
class ScalarField:
    grid: Grid
    centering: Centering
    data: np.ndarray
    mask: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "centering", Centering(self.centering))
        expected = self.grid.shape(self.centering)
        if tuple(self.data.shape) != expected:
            raise GridError(f"data shape {self.data.shape} does not match grid {expected} ({self.centering.value})")
        if self.mask is not None and tuple(self.mask.shape) != expected:
            raise GridError(f"mask shape {self.mask.shape} does not match grid {expected}")

    @classmethod
    def zeros(cls, grid: Grid, centering: Centering, mask: Optional[np.ndarray] = None) -> "ScalarField":
        return cls(grid, Centering(centering), np.zeros(grid.shape(centering)), mask)

    @classmethod
    def sample(
        cls,
        grid: Grid,
        centering: Centering,
        fn: Callable[..., np.ndarray],
        mask: Optional[np.ndarray] = None,
    ) -> "ScalarField":
        """Evaluate fn(x, y[, z]) at every grid point."""
        values = np.asarray(fn(*grid.coords(centering)), dtype=float)
        values = np.broadcast_to(values, grid.shape(centering)).copy()
        return cls(grid, Centering(centering), values, mask)

    def with_data(self, data: np.ndarray, mask: Optional[np.ndarray] = None) -> "ScalarField":
        return ScalarField(self.grid, self.centering, data, self.mask if mask is None else mask)

    def masked(self, mask: np.ndarray) -> "ScalarField":
        return ScalarField(self.grid, self.centering, self.data, mask)

    def valid(self) -> np.ndarray:
        return np.ones(self.data.shape, dtype=bool) if self.mask is None else self.mask

    def __add__(self, other: "ScalarField") -> "ScalarField":
        return self.with_data(self.data + _data_of(other))

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        return self.with_data(self.data - _data_of(other))

    def __mul__(self, c: float) -> "ScalarField":
        return self.with_data(self.data * c)

    __rmul__ = __mul__


def _data_of(x: ScalarField | np.ndarray | float) -> np.ndarray | float:
    return x.data if isinstance(x, ScalarField) else x


@dataclass(frozen=True, eq=False)
class VectorField:
    components: Tuple[ScalarField, ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise GridError("vector field needs at least one component")
        first = self.components[0]
        for c in self.components[1:]:
            if c.grid != first.grid or c.centering != first.centering:
                raise GridError("vector components must share grid and centering")
            if (c.mask is None) != (first.mask is None) or (
                c.mask is not None and not np.array_equal(c.mask, first.mask)
            ):
                raise GridError("vector components must share an identical mask")

    @classmethod
    def from_arrays(
        cls,
        grid: Grid,
        centering: Centering,
        arrays: Iterable[np.ndarray],
        mask: Optional[np.ndarray] = None,
    ) -> "VectorField":
        return cls(tuple(ScalarField(grid, Centering(centering), np.asarray(a, dtype=float), mask) for a in arrays))

    @classmethod
    def zeros(cls, grid: Grid, centering: Centering, m: Optional[int] = None) -> "VectorField":
        return cls.from_arrays(grid, centering, [np.zeros(grid.shape(centering)) for _ in range(m or grid.dim)])

    @property
    def grid(self) -> Grid:
        return self.components[0].grid

    @property
    def centering(self) -> Centering:
        return self.components[0].centering

    @property
    def mask(self) -> Optional[np.ndarray]:
        return self.components[0].mask

    @property
    def data(self) -> np.ndarray:
        """Stacked component array of shape (m, *grid_shape)."""
        return np.stack([c.data for c in self.components])

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, k: int) -> ScalarField:
        return self.components[k]

    def magnitude(self) -> ScalarField:
        return self.components[0].with_data(np.sqrt(np.sum(self.data**2, axis=0)))


@dataclass(frozen=True, eq=False)
class RefinementPair:
    """Coarse/fine pair used by between-grid error metrics."""
    coarse: ScalarField
    fine: ScalarField
    order: int = 2

    def __post_init__(self) -> None:
        if self.coarse.centering != self.fine.centering:
            raise GridError("refinement pair centering mismatch")
        if self.fine.grid.n != 2 * self.coarse.grid.n:
            raise GridError(f"n_fine={self.fine.grid.n} must be twice n_coarse={self.coarse.grid.n}")
        if not self.fine.grid.same_domain(self.coarse.grid):
            raise GridError("refinement pair grids cover different domains")

    def compare(self, exclusion_mask: Optional[np.ndarray] = None) -> float:
        from src.grid.norms import restrict_compare

        return restrict_compare(self.fine, self.coarse, exclusion_mask)


__all__ = [
    "Centering",
    "Grid",
    "make_grid",
    "ScalarField",
    "VectorField",
    "RefinementPair",
]
