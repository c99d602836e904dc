# src/elliptic/multigrid.py
from __future__ import annotations

"""Geometric multigrid
---------------------
V-cycles on a hierarchy of rediscretised operators A = shift M - coeff L:
red-black Gauss-Seidel smoothing, full-weighting restriction, linear
prolongation, sparse-direct solve on the coarsest level. The singular
Neumann operator is handled by keeping right-hand sides orthogonal to the
constants and projecting iterates to zero weighted mean.

When n does not coarsen (odd n, or too few levels) solve() is delegated to
Jacobi-preconditioned conjugate gradients.
"""

from dataclasses import dataclass, field as dc_field
from typing import List, Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from src.core.errors import SolverError
from src.elliptic.matrices import Layout, mass_matrix, operator_matrix, prolongation, restriction, unknown_count
from src.utils.config import SolverKind, SolverOptions
from src.utils.logger import get_logger
from src.utils.timing import Stopwatch

log = get_logger(__name__)


@dataclass
class SolverStats:
    iterations: int = 0
    residual: float = 0.0
    wall_ms: float = 0.0
    solver: str = ""
    history: List[float] = dc_field(default_factory=list)
    compatibility: float = 0.0

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "residual": self.residual,
            "wall_ms": round(self.wall_ms, 3),
            "solver": self.solver,
            "compatibility": self.compatibility,
        }


def is_multigrid_friendly(n: int, coarsest_n: int = 4) -> bool:
    """At least one coarsening step is possible."""
    return n % 2 == 0 and n // 2 >= coarsest_n


@dataclass
class _Level:
    n: int
    A: sp.csr_matrix
    diag: np.ndarray
    colors: List[np.ndarray]
    P: Optional[sp.csr_matrix] = None  # from the next coarser level
    R: Optional[sp.csr_matrix] = None


class MultigridSolver:
    def __init__(
        self,
        n: int,
        dim: int,
        layout: Layout,
        h: float,
        shift: float = 0.0,
        coeff: float = 1.0,
        options: Optional[SolverOptions] = None,
    ):
        self.n, self.dim, self.layout, self.h = n, dim, Layout(layout), h
        self.shift, self.coeff = shift, coeff
        self.options = options or SolverOptions()
        self.singular = self.layout == Layout.node_neumann and shift == 0.0
        self.weights = mass_matrix(n, dim, self.layout).diagonal()
        self.levels: List[_Level] = []
        self._build()

    # ---- hierarchy ----

    def _level(self, n: int, h: float) -> _Level:
        A = operator_matrix(n, self.dim, self.layout, h, self.shift, self.coeff)
        m = unknown_count(n, self.layout)
        parity = np.indices((m,) * self.dim).sum(axis=0).ravel() % 2
        return _Level(n=n, A=A, diag=A.diagonal().copy(), colors=[parity == 0, parity == 1])

    def _build(self) -> None:
        n, h = self.n, self.h
        self.levels.append(self._level(n, h))
        while is_multigrid_friendly(n, self.options.coarsest_n):
            n //= 2
            h *= 2.0
            fine = self.levels[-1]
            fine.P = prolongation(n, self.dim, self.layout)
            fine.R = restriction(n, self.dim, self.layout)
            self.levels.append(self._level(n, h))
        coarse = self.levels[-1].A
        if self.singular:
            self._coarse_pinv = np.linalg.pinv(coarse.toarray())
            self._coarse_lu = None
        else:
            self._coarse_lu = spla.splu(coarse.tocsc())
        log.debug(
            "multigrid: %d levels (n=%d..%d), layout=%s",
            len(self.levels), self.n, self.levels[-1].n, self.layout.value,
        )

    @property
    def depth(self) -> int:
        return len(self.levels)

    # ---- cycle ----

    def _smooth(self, lvl: _Level, x: np.ndarray, b: np.ndarray, sweeps: int) -> np.ndarray:
        for _ in range(sweeps):
            for color in lvl.colors:
                r = b - lvl.A @ x
                x[color] += r[color] / lvl.diag[color]
        return x

    def _coarse_solve(self, b: np.ndarray) -> np.ndarray:
        if self._coarse_lu is not None:
            return self._coarse_lu.solve(b)
        return self._coarse_pinv @ b

    def _vcycle(self, k: int, x: np.ndarray, b: np.ndarray) -> np.ndarray:
        lvl = self.levels[k]
        if k == len(self.levels) - 1:
            return self._coarse_solve(b)
        x = self._smooth(lvl, x, b, self.options.pre_smooth)
        r = b - lvl.A @ x
        rc = lvl.R @ r
        ec = self._vcycle(k + 1, np.zeros_like(rc), rc)
        x = x + lvl.P @ ec
        return self._smooth(lvl, x, b, self.options.post_smooth)

    def project_mean(self, x: np.ndarray) -> np.ndarray:
        return x - np.dot(self.weights, x) / self.weights.sum()

    # ---- driver ----

    def solve(self, b: np.ndarray, x0: Optional[np.ndarray] = None) -> tuple[np.ndarray, SolverStats]:
        opts = self.options
        stats = SolverStats(solver="mg")
        if self.singular:
            stats.compatibility = float(b.sum() / self.weights.sum())
            b = b - self.weights * stats.compatibility
        if self.depth < 2 or opts.kind == SolverKind.pcg:
            return self._pcg(b, x0, stats)

        bnorm = float(np.max(np.abs(b))) if b.size else 0.0
        x = np.zeros_like(b) if x0 is None else x0.astype(float).copy()
        A = self.levels[0].A
        with Stopwatch() as sw:
            if bnorm == 0.0:
                x[:] = 0.0
            else:
                target = opts.tolerance * bnorm
                for cycle in range(1, opts.max_cycles + 1):
                    x = self._vcycle(0, x, b)
                    if self.singular:
                        x = self.project_mean(x)
                    res = float(np.max(np.abs(b - A @ x)))
                    stats.history.append(res)
                    stats.iterations = cycle
                    if res <= target:
                        break
                    if not np.isfinite(res):
                        break
        stats.wall_ms = sw.elapsed_ms()
        stats.residual = stats.history[-1] if stats.history else 0.0
        if bnorm and not stats.residual <= opts.tolerance * bnorm:
            raise SolverError(
                f"multigrid did not reach {opts.tolerance:.1e}*|b| in {stats.iterations} cycles "
                f"(n={self.n}, {self.layout.value})",
                stats.history,
            )
        return x, stats

    def _pcg(self, b: np.ndarray, x0: Optional[np.ndarray], stats: SolverStats) -> tuple[np.ndarray, SolverStats]:
        opts = self.options
        A = self.levels[0].A
        diag = self.levels[0].diag
        precond = spla.LinearOperator(A.shape, matvec=lambda r: r / diag, dtype=float)
        stats.solver = "pcg"
        bnorm = float(np.max(np.abs(b))) if b.size else 0.0
        if bnorm == 0.0:
            return np.zeros_like(b), stats

        def track(xk: np.ndarray) -> None:
            stats.iterations += 1
            if stats.iterations % 50 == 0:
                stats.history.append(float(np.max(np.abs(b - A @ xk))))

        with Stopwatch() as sw:
            x, info = spla.cg(
                A, b, x0=x0, rtol=opts.tolerance, atol=0.0, maxiter=opts.pcg_max_iter, M=precond, callback=track
            )
            if self.singular:
                x = self.project_mean(x)
        stats.wall_ms = sw.elapsed_ms()
        stats.residual = float(np.max(np.abs(b - A @ x)))
        stats.history.append(stats.residual)
        if info != 0:
            raise SolverError(
                f"conjugate gradients stopped with info={info} after {stats.iterations} iterations (n={self.n})",
                stats.history,
            )
        return x, stats


__all__ = ["SolverStats", "MultigridSolver", "is_multigrid_friendly"]
