"""
Core package for the jump-splice benchmark.
Lightweight package init to avoid import cycles.

Consumers should import submodules directly, e.g.:
  from src.core.experiment_loader import ExperimentLoader, Experiment
  from src.core.engine import Engine, golden_check
  from src.core.errors import SpliceError
"""

__all__: list[str] = []
