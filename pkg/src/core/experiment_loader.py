# src/core/experiment_loader.py
from __future__ import annotations

"""Experiment schema and loader
------------------------------
Pydantic models for convergence experiments and a YAML loader supporting
multi-document files, directory scans and override files.
"""

import os
import re
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.core.errors import ExperimentError
from src.geometry.shapes import Shape
from src.navier_stokes.state import FlowConfig
from src.utils.config import SdfSource, get_settings


# ---------- Enums ----------


class ExperimentKind(str, Enum):
    splice_laplacian = "splice_laplacian"
    poisson = "poisson"
    quadrature_perimeter = "quadrature_perimeter"
    quadrature_integral = "quadrature_integral"
    quadrature_volume = "quadrature_volume"
    navier_stokes = "navier_stokes"
    navier_stokes_delta = "navier_stokes_delta"

    @property
    def is_flow(self) -> bool:
        return self in (ExperimentKind.navier_stokes, ExperimentKind.navier_stokes_delta)

    @property
    def is_quadrature(self) -> bool:
        return self.value.startswith("quadrature")


METRICS: Dict[ExperimentKind, List[str]] = {
    ExperimentKind.splice_laplacian: ["linf", "l2"],
    ExperimentKind.poisson: ["linf", "l2"],
    ExperimentKind.quadrature_perimeter: ["error"],
    ExperimentKind.quadrature_integral: ["error"],
    ExperimentKind.quadrature_volume: ["error"],
    ExperimentKind.navier_stokes: ["E_u", "E_p", "E_phi", "E_vol"],
    ExperimentKind.navier_stokes_delta: ["E_u", "E_p", "E_phi", "E_vol"],
}

# default band half-width in cells per kind
BAND_CELLS: Dict[ExperimentKind, float] = {
    ExperimentKind.splice_laplacian: 12.0,
    ExperimentKind.poisson: 12.0,
    ExperimentKind.quadrature_perimeter: 14.0,
    ExperimentKind.quadrature_integral: 14.0,
    ExperimentKind.quadrature_volume: 14.0,
}


# ---------- Small models ----------


class ExpectedRow(BaseModel):
    """Published error values for one resolution."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    n: int = Field(..., ge=2)
    values: Dict[str, float]
    reference: str = Field(..., min_length=1, description="Where the value was published")
    check: bool = Field(default=True, description="Enforced by --golden; otherwise informational")
    tolerance: Optional[float] = Field(default=None, gt=0.0, description="Overrides the experiment tolerance")


class RateFloor(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    metric: str
    min: Optional[float] = None
    max: Optional[float] = None
    from_n: Optional[int] = Field(default=None, description="Only rates at rows n >= from_n")

    @model_validator(mode="after")
    def _one_bound(self) -> "RateFloor":
        if self.min is None and self.max is None:
            raise ValueError("rate bound needs min or max")
        return self


# ---------- Experiment ----------


_ID_RE = re.compile(r"^[a-z0-9][a-z0-9._-]*$")


class Experiment(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    title: str = ""
    kind: ExperimentKind
    dim: int = Field(default=2, ge=2, le=3)
    lower: float = -1.0
    upper: float = 1.0
    shape: Optional[Shape] = None
    solution: Optional[str] = None
    integrand: Optional[str] = None
    exact: Optional[float] = Field(default=None, description="Reference integral when no closed form")
    n_list: List[int] = Field(..., min_length=1)
    q: int = Field(default=3, ge=1, le=3)
    sdf: SdfSource = SdfSource.exact
    band_cells: Optional[float] = Field(default=None, gt=0.0)
    expected: List[ExpectedRow] = Field(default_factory=list)
    tolerance: Dict[str, float] = Field(default_factory=dict)
    rate_floors: List[RateFloor] = Field(default_factory=list)
    average_rate_floor: Dict[str, float] = Field(default_factory=dict)
    flow: Optional[FlowConfig] = None

    @field_validator("id")
    @classmethod
    def _id_slug(cls, v: str) -> str:
        v = v.strip()
        if not _ID_RE.match(v):
            raise ValueError("id must be a lowercase slug (letters, digits, '.', '_', '-')")
        return v

    @field_validator("n_list")
    @classmethod
    def _n_sorted(cls, v: List[int]) -> List[int]:
        if any(n < 4 for n in v):
            raise ValueError("every n must be >= 4")
        if sorted(set(v)) != v:
            raise ValueError("n_list must be strictly increasing")
        return v

    @model_validator(mode="after")
    def _kind_requirements(self) -> "Experiment":
        k = self.kind
        if k.is_flow:
            if self.flow is None:
                raise ValueError(f"kind '{k.value}' needs a 'flow' section")
            if self.dim != 2:
                raise ValueError("flow experiments are two-dimensional")
            return self
        if self.shape is None:
            raise ValueError(f"kind '{k.value}' needs a 'shape'")
        if self.shape.dim != self.dim:
            raise ValueError(f"shape is {self.shape.dim}D but dim={self.dim}")
        if k in (ExperimentKind.splice_laplacian, ExperimentKind.poisson) and not self.solution:
            raise ValueError(f"kind '{k.value}' needs a 'solution'")
        if k == ExperimentKind.quadrature_integral and (self.integrand is None or self.exact is None):
            raise ValueError("quadrature_integral needs 'integrand' and 'exact'")
        return self

    @property
    def metrics(self) -> List[str]:
        return METRICS[self.kind]

    @property
    def band_width_cells(self) -> float:
        if self.band_cells is not None:
            return self.band_cells
        if self.kind.is_flow and self.flow is not None:
            return self.flow.band_cells
        return BAND_CELLS[self.kind]

    def expected_for(self, n: int) -> Optional[ExpectedRow]:
        for row in self.expected:
            if row.n == n:
                return row
        return None


# ---------- Loading ----------


def _subst_env(obj: Any) -> Any:
    if isinstance(obj, str):
        return re.sub(r"\$\{([A-Za-z_][A-Za-z0-9_]*)\}", lambda m: os.environ.get(m.group(1), m.group(0)), obj)
    if isinstance(obj, list):
        return [_subst_env(x) for x in obj]
    if isinstance(obj, dict):
        return {k: _subst_env(v) for k, v in obj.items()}
    return obj


def _validation_message(header: str, ve: ValidationError) -> str:
    lines = [header]
    for e in ve.errors():
        loc = ".".join(str(p) for p in e.get("loc", []))
        lines.append(f"  - {loc}: {e.get('msg', 'invalid value')}")
    return "\n".join(lines)


def load_experiments_file(path: Path | str) -> list[Experiment]:
    """Load one or more experiments from a YAML file (supports multi-document)."""
    fp = Path(path)
    if not fp.exists():
        raise FileNotFoundError(f"Experiment file not found: {fp}")
    try:
        docs = list(yaml.safe_load_all(fp.read_text(encoding="utf-8")))
    except yaml.YAMLError as ye:
        raise ValueError(f"YAML parse error in {fp}: {ye}") from ye

    out: list[Experiment] = []
    for idx, data in enumerate(docs, start=1):
        if data is None:
            continue
        if not isinstance(data, dict):
            raise ValueError(f"Document {idx} in {fp} must be a mapping/object.")
        try:
            out.append(Experiment.model_validate(_subst_env(data)))
        except ValidationError as ve:
            raise ValueError(_validation_message(f"Invalid experiment '{fp}' (document {idx}):", ve)) from ve
    if not out:
        raise ValueError(f"No experiment documents found in {fp}")
    return out


def find_yaml_files(root: Path, recursive: bool = True) -> list[Path]:
    if recursive:
        return sorted(list(root.rglob("*.yaml")) + list(root.rglob("*.yml")))
    return sorted(list(root.glob("*.yaml")) + list(root.glob("*.yml")))


def apply_override(experiment: Experiment, override: Dict[str, Any]) -> Experiment:
    """Deep-merge a mapping into an experiment and re-validate it."""

    def merge(base: Any, extra: Any) -> Any:
        if isinstance(base, dict) and isinstance(extra, dict):
            merged = dict(base)
            for k, v in extra.items():
                merged[k] = merge(base.get(k), v)
            return merged
        return extra

    data = merge(experiment.model_dump(mode="json"), override)
    try:
        return Experiment.model_validate(data)
    except ValidationError as ve:
        raise ValueError(_validation_message(f"Invalid override for '{experiment.id}':", ve)) from ve


def load_override(path: Path | str) -> Dict[str, Any]:
    fp = Path(path)
    if not fp.exists():
        raise FileNotFoundError(f"Override file not found: {fp}")
    data = yaml.safe_load(fp.read_text(encoding="utf-8")) or {}
    if not isinstance(data, dict):
        raise ValueError(f"Override file {fp} must hold a mapping/object.")
    return data


class ExperimentLoader:
    """Scans a directory of experiment YAML files."""

    def __init__(self, root: Optional[Path] = None, recursive: bool = True):
        self.root = Path(root) if root is not None else get_settings().EXPERIMENTS_DIR
        self.recursive = recursive

    def load_directory(self, *, strict: bool = False) -> list[Experiment]:
        experiments: list[Experiment] = []
        for fp in find_yaml_files(self.root, self.recursive):
            try:
                experiments.extend(load_experiments_file(fp))
            except (ValueError, FileNotFoundError):
                if strict:
                    raise
                continue
        return experiments

    def registry(self) -> Dict[str, Experiment]:
        return {e.id: e for e in self.load_directory()}

    def get(self, experiment_id: str) -> Experiment:
        known = self.registry()
        if experiment_id not in known:
            raise ExperimentError(experiment_id, known.keys())
        return known[experiment_id]


__all__ = [
    "ExperimentKind",
    "METRICS",
    "BAND_CELLS",
    "ExpectedRow",
    "RateFloor",
    "Experiment",
    "load_experiments_file",
    "find_yaml_files",
    "apply_override",
    "load_override",
    "ExperimentLoader",
]
