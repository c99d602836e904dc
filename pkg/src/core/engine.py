# src/core/engine.py
from __future__ import annotations

"""Experiment engine
-------------------
Runs validated experiments, writes per-experiment CSVs and a run log, and
checks results against published values and convergence-rate floors.
"""

import contextvars
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from src.core.errors import SpliceError
from src.core.experiment_loader import Experiment
from src.harness.drivers import run_delta_baseline, run_experiment
from src.harness.results import STATUS_OK, ExperimentResult
from src.utils.config import Settings, SolverOptions, get_settings
from src.utils.logger import attach_file_logger, bound, detach_file_logger, get_logger
from src.utils.timing import Stopwatch

DEFAULT_TOLERANCE = 2.0


@dataclass
class RunOutcome:
    experiment_id: str
    ok: bool
    result: Optional[ExperimentResult] = None
    failures: List[str] = field(default_factory=list)
    error: Optional[str] = None
    error_type: Optional[str] = None
    csv_path: Optional[Path] = None
    wall_ms: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        d: Dict[str, Any] = {
            "id": self.experiment_id,
            "ok": self.ok,
            "failures": list(self.failures),
            "csv": str(self.csv_path) if self.csv_path else None,
            "wall_ms": round(self.wall_ms, 1),
        }
        if self.result is not None:
            d["result"] = self.result.to_dict()
        if self.error:
            d["error"] = self.error
            d["error_type"] = self.error_type
        return d


# ---------- golden checks ----------


def golden_check(exp: Experiment, result: ExperimentResult) -> List[str]:
    """Return human-readable failures; an empty list means the experiment passes."""
    failures: List[str] = []

    for expected in exp.expected:
        if not expected.check:
            continue
        row = result.row(expected.n)
        if row is None or row.status != STATUS_OK:
            continue
        for metric, published in expected.values.items():
            measured = row.values.get(metric)
            if measured is None:
                continue
            tol = expected.tolerance or exp.tolerance.get(metric, DEFAULT_TOLERANCE)
            if measured > published * tol:
                failures.append(
                    f"{metric} at n={expected.n}: {measured:.3e} exceeds {tol:g} x {published:.3e} ({expected.reference})"
                )

    for bound in exp.rate_floors:
        for n, rate in zip(result.ns, result.rates(bound.metric)):
            if rate is None or (bound.from_n is not None and n < bound.from_n):
                continue
            if bound.min is not None and rate < bound.min:
                failures.append(f"{bound.metric} rate at n={n}: {rate:.3f} below {bound.min:g}")
            if bound.max is not None and rate > bound.max:
                failures.append(f"{bound.metric} rate at n={n}: {rate:.3f} above {bound.max:g}")

    for metric, floor in exp.average_rate_floor.items():
        avg = result.average_rate(metric)
        if avg is not None and avg < floor:
            failures.append(f"{metric} average rate {avg:.3f} below {floor:g}")

    return failures


# ---------- engine ----------


class Engine:
    """Runs experiments and manages their output files."""

    def __init__(
        self,
        settings: Optional[Settings] = None,
        options: Optional[SolverOptions] = None,
        out_dir: Optional[Path] = None,
        golden: bool = False,
    ):
        self.settings = settings or get_settings()
        self.options = options or SolverOptions.from_settings(self.settings)
        self.out_dir = Path(out_dir) if out_dir is not None else self.settings.OUTPUT_DIR
        self.golden = golden
        self.log = get_logger(__name__)
    def run_experiment(
        self,
        exp: Experiment,
        n_list: Optional[Sequence[int]] = None,
        baseline: bool = False,
    ) -> RunOutcome:
        """Sweep one experiment; failures are reported in the outcome, never raised."""
        label = f"{exp.id}_delta" if baseline else exp.id
        self.out_dir.mkdir(parents=True, exist_ok=True)
        handler = attach_file_logger(self.out_dir / f"{label}.log")
        snapshot_dir = self.out_dir / "snapshots" if self.settings.SNAPSHOTS else None
        sw = Stopwatch().start()
        with bound(experiment=label):
            try:
                ns = list(n_list) if n_list else None
                if baseline:
                    result = run_delta_baseline(exp, ns, self.options, snapshot_dir)
                    result.experiment_id = label
                else:
                    result = run_experiment(exp, ns, self.options, snapshot_dir)
                csv_path = result.write_csv(self.out_dir)
                failures = golden_check(exp, result) if self.golden and not baseline else []
                for msg in failures:
                    self.log.warning("golden: %s", msg)
                return RunOutcome(label, not failures, result, failures, csv_path=csv_path, wall_ms=sw.stop())
            except (SpliceError, ValueError) as e:
                self.log.exception("Experiment failed:")
                return RunOutcome(label, False, error=str(e), error_type=e.__class__.__name__, wall_ms=sw.stop())
            finally:
                detach_file_logger(handler)

    def run_many(
        self,
        experiments: Sequence[Experiment],
        n_list: Optional[Sequence[int]] = None,
        parallel: bool = False,
        max_workers: int = 1,
    ) -> List[RunOutcome]:
        with bound(run_id=datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")):
            if parallel and len(experiments) > 1:
                outcomes: Dict[str, RunOutcome] = {}
                with ThreadPoolExecutor(max_workers=max(1, max_workers)) as ex:
                    # each worker gets its own copy of the bound context
                    fut_map = {
                        ex.submit(contextvars.copy_context().run, self.run_experiment, e, n_list): e
                        for e in experiments
                    }
                    for fut in as_completed(fut_map):
                        outcomes[fut_map[fut].id] = fut.result()
                return [outcomes[e.id] for e in experiments]
            return [self.run_experiment(e, n_list) for e in experiments]


__all__ = ["DEFAULT_TOLERANCE", "RunOutcome", "golden_check", "Engine"]
