# src/harness/results.py
from __future__ import annotations

"""Result records
----------------
Rows of a convergence sweep and their CSV/JSON renderings. CSV output holds
only deterministic numbers: floats as %.6e, rates as %.3f, no timings.
"""

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.harness.rates import average_rate, observed_rates
from src.utils.logger import get_logger

log = get_logger(__name__)

STATUS_OK = "ok"
STATUS_NOT_RUN = "not run"
STATUS_FAILED = "failed"


@dataclass
class ResultRow:
    n: int
    values: Dict[str, Optional[float]] = field(default_factory=dict)
    status: str = STATUS_OK
    note: str = ""


@dataclass
class ExperimentResult:
    experiment_id: str
    metrics: List[str]
    rows: List[ResultRow] = field(default_factory=list)
    volume_series: Dict[int, List[Tuple[float, float]]] = field(default_factory=dict)
    pressure_slices: Dict[int, List[Tuple[float, float]]] = field(default_factory=dict)
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def ns(self) -> List[int]:
        return [r.n for r in self.rows]

    def series(self, metric: str) -> List[Optional[float]]:
        return [r.values.get(metric) if r.status == STATUS_OK else None for r in self.rows]

    def rates(self, metric: str) -> List[Optional[float]]:
        return observed_rates(self.ns, self.series(metric))

    def average_rate(self, metric: str) -> Optional[float]:
        return average_rate(self.ns, self.series(metric))

    def row(self, n: int) -> Optional[ResultRow]:
        for r in self.rows:
            if r.n == n:
                return r
        return None

    # ---------- renderings ----------

    def header(self) -> List[str]:
        cols = ["n"]
        for m in self.metrics:
            cols += [m, f"{m}_rate"]
        return cols + ["status"]

    def csv_rows(self) -> List[List[str]]:
        rates = {m: self.rates(m) for m in self.metrics}
        out = []
        for k, r in enumerate(self.rows):
            line = [str(r.n)]
            for m in self.metrics:
                v = r.values.get(m) if r.status == STATUS_OK else None
                rate = rates[m][k]
                line.append("" if v is None else "%.6e" % v)
                line.append("" if rate is None else "%.3f" % rate)
            line.append(r.status)
            out.append(line)
        return out

    def write_csv(self, out_dir: Path) -> Path:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / f"{self.experiment_id}.csv"
        with path.open("w", newline="", encoding="utf-8") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(self.header())
            w.writerows(self.csv_rows())
        written = [path]
        if self.volume_series:
            written.append(self._write_volume_csv(out_dir))
        for n, rows in sorted(self.pressure_slices.items()):
            written.append(_write_pairs(out_dir / f"{self.experiment_id}_pressure_slice_n{n}.csv", ("y", "p"), rows))
        log.debug("wrote %s", ", ".join(p.name for p in written))
        return path

    def _write_volume_csv(self, out_dir: Path) -> Path:
        path = out_dir / f"{self.experiment_id}_volume.csv"
        with path.open("w", newline="", encoding="utf-8") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["n", "t", "volume"])
            for n, series in sorted(self.volume_series.items()):
                for t, v in series:
                    w.writerow([str(n), "%.6e" % t, "%.6e" % v])
        return path

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.experiment_id,
            "metrics": list(self.metrics),
            "rows": [asdict(r) for r in self.rows],
            "rates": {m: self.rates(m) for m in self.metrics},
            "average_rates": {m: self.average_rate(m) for m in self.metrics},
            **self.extra,
        }


def _write_pairs(path: Path, header: Sequence[str], rows: Sequence[Tuple[float, float]]) -> Path:
    with path.open("w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(list(header))
        for a, b in rows:
            w.writerow(["%.6e" % a, "%.6e" % b])
    return path


def write_summary(path: Path | str, results: Sequence[Dict[str, Any]]) -> Path:
    out = Path(path).resolve()
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps({"results": list(results)}, indent=2, default=str), encoding="utf-8")
    return out


__all__ = [
    "STATUS_OK",
    "STATUS_NOT_RUN",
    "STATUS_FAILED",
    "ResultRow",
    "ExperimentResult",
    "write_summary",
]
