# src/harness/__init__.py
from src.harness.drivers import (
    INTEGRANDS,
    capped,
    experiment_band,
    experiment_grid,
    measure_poisson,
    measure_quadrature,
    measure_splice_laplacian,
    run_delta_baseline,
    run_experiment,
)
from src.harness.rates import average_rate, observed_rates
from src.harness.results import STATUS_NOT_RUN, STATUS_OK, ExperimentResult, ResultRow, write_summary

__all__ = [
    "INTEGRANDS",
    "capped",
    "experiment_band",
    "experiment_grid",
    "measure_poisson",
    "measure_quadrature",
    "measure_splice_laplacian",
    "run_delta_baseline",
    "run_experiment",
    "average_rate",
    "observed_rates",
    "STATUS_OK",
    "STATUS_NOT_RUN",
    "ExperimentResult",
    "ResultRow",
    "write_summary",
]
