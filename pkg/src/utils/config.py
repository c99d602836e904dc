# src/utils/config.py
from __future__ import annotations

import functools
from enum import Enum
from pathlib import Path

from pydantic import BaseModel, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


# ---------- Enums ----------

class LogLevel(str, Enum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


class SolverKind(str, Enum):
    mg = "mg"
    pcg = "pcg"


class SdfSource(str, Enum):
    exact = "exact"
    reconstruct = "reconstruct"


# ---------- Settings ----------

class Settings(BaseSettings):
    """
    Central configuration for splice-bench.

    Values load in this order of precedence:
      1) Environment variables
      2) .env file in project root
      3) Defaults below
    """

    # ---- Paths ----
    OUTPUT_DIR: Path = Field(default=Path("./results"))
    EXPERIMENTS_DIR: Path = Field(default=Path("./experiments"))

    # ---- Linear solvers ----
    SOLVER: SolverKind = Field(default=SolverKind.mg, description="Elliptic solver (mg or pcg)")
    SOLVER_TOLERANCE: float = Field(default=1e-10, gt=0.0, lt=1.0, description="Relative residual")
    SOLVER_MAX_CYCLES: int = Field(default=200, ge=1, description="V-cycles / CG iterations cap")
    MG_PRE_SMOOTH: int = Field(default=2, ge=1, le=8)
    MG_POST_SMOOTH: int = Field(default=2, ge=1, le=8)
    MG_COARSEST_N: int = Field(default=4, ge=2, le=64, description="Stop coarsening at this n")
    PCG_MAX_ITER: int = Field(default=20000, ge=10)

    # ---- Geometry ----
    NEWTON_MAX_ITER: int = Field(default=30, ge=5, le=200)
    RECONSTRUCT_SEEDS: int = Field(default=3, ge=1, le=8, description="Closest-point seeds per point")
    MAX_FALLBACK_FRACTION: float = Field(default=0.01, ge=0.0, le=1.0)
    CURVATURE_CLAMP: bool = Field(default=True, description="Clamp |kappa| <= 1/(2h)")

    # ---- Desk-scale caps ----
    MAX_N_2D: int = Field(default=1024, ge=8)
    MAX_N_3D: int = Field(default=256, ge=8)
    MAX_N_NS: int = Field(default=256, ge=8)

    # ---- Logging ----
    LOG_LEVEL: LogLevel = Field(default=LogLevel.INFO)
    LOG_TO_FILE: bool = Field(default=False)
    LOG_FILE: Path = Field(default=Path("./splice-bench.log"))
    COLORIZED_OUTPUT: bool = Field(default=True)

    # ---- Execution ----
    PARALLEL_EXECUTION: bool = Field(default=False)
    MAX_WORKERS: int = Field(default=3, ge=1)
    SNAPSHOTS: bool = Field(default=False, description="Dump NS field snapshots")

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    @field_validator("OUTPUT_DIR", "EXPERIMENTS_DIR", "LOG_FILE", mode="before")
    @classmethod
    def _coerce_to_path(cls, v):
        if isinstance(v, Path):
            return v
        return Path(str(v)) if v is not None else v

    @field_validator("OUTPUT_DIR", "EXPERIMENTS_DIR", "LOG_FILE", mode="after")
    @classmethod
    def _absolutize(cls, v: Path):
        return v if v.is_absolute() else Path.cwd() / v

    def ensure_dirs(self) -> None:
        """Create required directories (idempotent)."""
        for p in {self.OUTPUT_DIR, self.LOG_FILE.parent}:
            p.mkdir(parents=True, exist_ok=True)

    def max_n(self, dim: int, navier_stokes: bool = False) -> int:
        if navier_stokes:
            return self.MAX_N_NS
        return self.MAX_N_3D if dim == 3 else self.MAX_N_2D


# --------- Public accessor (memoized) ---------

@functools.lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Load and cache settings once per process.
    Call `get_settings.cache_clear()` if you need to reload after changing env.
    """
    s = Settings()
    s.ensure_dirs()
    return s


class SolverOptions(BaseModel):
    """Solver knobs handed down to the elliptic layer."""

    kind: SolverKind = SolverKind.mg
    tolerance: float = 1e-10
    max_cycles: int = 200
    pre_smooth: int = 2
    post_smooth: int = 2
    coarsest_n: int = 4
    pcg_max_iter: int = 20000

    @classmethod
    def from_settings(cls, s: Settings) -> "SolverOptions":
        return cls(
            kind=s.SOLVER,
            tolerance=s.SOLVER_TOLERANCE,
            max_cycles=s.SOLVER_MAX_CYCLES,
            pre_smooth=s.MG_PRE_SMOOTH,
            post_smooth=s.MG_POST_SMOOTH,
            coarsest_n=s.MG_COARSEST_N,
            pcg_max_iter=s.PCG_MAX_ITER,
        )
