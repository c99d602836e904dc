"""
Generate a results index JSON summarizing convergence CSVs.

Usage:
  python scripts/generate_index.py [results_dir] [output_path]

Writes a JSON with structure:
{
  "generated_at": "...",
  "experiments": [
     {"id": "poisson-circle-log", "csv": "...", "rows": [{"n": "40", "linf": "...", ...}],
      "side_files": ["..."], "log": "..."}
  ]
}
"""

import csv
import json
import sys
from datetime import datetime, timezone
from pathlib import Path


def _side_files(results_root: Path, exp_id: str) -> list:
    return sorted(
        str(p)
        for p in results_root.glob(f"{exp_id}_*.csv")
        if p.stem.endswith("_volume") or "_pressure_slice_" in p.stem
    )


def main():
    results_root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("results")
    if not results_root.exists():
        print("No results directory found.")
        return 1

    experiments = []
    for path in sorted(results_root.glob("*.csv")):
        if path.stem.endswith("_volume") or "_pressure_slice_" in path.stem:
            continue
        with path.open(newline="", encoding="utf-8") as f:
            rows = list(csv.DictReader(f))
        log_path = path.with_suffix(".log")
        experiments.append(
            {
                "id": path.stem,
                "csv": str(path),
                "rows": rows,
                "side_files": _side_files(results_root, path.stem),
                "log": str(log_path) if log_path.exists() else None,
            }
        )

    out = {
        "generated_at": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
        "experiments": experiments,
    }

    output_path = Path(sys.argv[2]) if len(sys.argv) > 2 else results_root / "index.json"
    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_text(json.dumps(out, indent=2), encoding="utf-8")
    print(f"Wrote results index: {output_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
