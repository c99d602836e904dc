# scripts/validate_experiments.py
"""
Validate all YAML experiments under ./experiments directory.
Run: python scripts/validate_experiments.py
"""

from pathlib import Path

from src.core.experiment_loader import ExperimentLoader
from src.utils.logger import get_logger


def main():
    log = get_logger(__name__)
    root = Path("experiments")

    if not root.exists():
        log.error("No experiments/ directory found.")
        return 1

    try:
        experiments = ExperimentLoader(root).load_directory(strict=True)
    except ValueError as e:
        log.error(str(e))
        return 1
    log.info(f"Validated {len(experiments)} experiment(s).")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
