# src/grid/io.py
from __future__ import annotations

"""Field dump/load
-----------------
A field is stored as <stem>.bin (little-endian float64 values in C order,
followed by one uint8 per point when a mask is present) next to a <stem>.json
header describing the grid.
"""

import csv
import json
from pathlib import Path
from typing import Mapping

import numpy as np

from src.core.errors import GridError
from src.grid.grid import Centering, Grid, ScalarField


def _paths(path: Path | str) -> tuple[Path, Path]:
    p = Path(path)
    stem = p.with_suffix("") if p.suffix in (".bin", ".json") else p
    return stem.with_suffix(".bin"), stem.with_suffix(".json")


def dump_field(path: Path | str, field: ScalarField) -> Path:
    bin_path, header_path = _paths(path)
    bin_path.parent.mkdir(parents=True, exist_ok=True)
    g = field.grid
    header = {
        "dim": g.dim,
        "n": g.n,
        "h": g.h,
        "origin": list(g.origin),
        "centering": field.centering.value,
        "dtype": "<f8",
        "mask": field.mask is not None,
    }
    with bin_path.open("wb") as f:
        f.write(np.ascontiguousarray(field.data, dtype="<f8").tobytes())
        if field.mask is not None:
            f.write(np.ascontiguousarray(field.mask, dtype=np.uint8).tobytes())
    header_path.write_text(json.dumps(header, indent=2), encoding="utf-8")
    return bin_path


def load_field(path: Path | str) -> ScalarField:
    bin_path, header_path = _paths(path)
    if not header_path.exists() or not bin_path.exists():
        raise FileNotFoundError(f"field files not found: {bin_path}, {header_path}")
    header = json.loads(header_path.read_text(encoding="utf-8"))
    try:
        grid = Grid(int(header["dim"]), int(header["n"]), float(header["h"]), tuple(header["origin"]))
        centering = Centering(header["centering"])
    except (KeyError, ValueError) as e:
        raise GridError(f"invalid field header {header_path}: {e}") from e

    shape = grid.shape(centering)
    count = int(np.prod(shape))
    raw = bin_path.read_bytes()
    expected = count * 8 + (count if header.get("mask") else 0)
    if len(raw) != expected:
        raise GridError(f"{bin_path} holds {len(raw)} bytes, header implies {expected}")
    data = np.frombuffer(raw, dtype="<f8", count=count).reshape(shape).astype(float)
    mask = None
    if header.get("mask"):
        mask = np.frombuffer(raw, dtype=np.uint8, count=count, offset=count * 8).reshape(shape).astype(bool)
    return ScalarField(grid, centering, data, mask)


def export_slice_csv(
    path: Path | str,
    field: ScalarField,
    along: int,
    at: Mapping[int, float],
) -> Path:
    """Write (coordinate, value) rows along one grid line; other axes fixed at the nearest line to `at`."""
    g = field.grid
    index: list[int | slice] = []
    for a in range(g.dim):
        if a == along:
            index.append(slice(None))
            continue
        if a not in at:
            raise GridError(f"slice needs a coordinate for axis {a}")
        coords = g.axis_coords(a, field.centering)
        index.append(int(np.argmin(np.abs(coords - at[a]))))

    xs = g.axis_coords(along, field.centering)
    values = field.data[tuple(index)]
    valid = field.valid()[tuple(index)]
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["coord", "value"])
        for x, v, ok in zip(xs, values, valid):
            if ok:
                w.writerow([f"{x:.10e}", f"{v:.10e}"])
    return out


__all__ = ["dump_field", "load_field", "export_slice_csv"]
