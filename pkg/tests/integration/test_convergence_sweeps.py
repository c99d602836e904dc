from pathlib import Path

import pytest

from src.core.engine import Engine
from src.core.experiment_loader import ExperimentLoader, apply_override
from src.harness.drivers import run_delta_baseline, run_experiment
from src.harness.results import STATUS_NOT_RUN

EXPERIMENTS = Path(__file__).resolve().parents[2] / "experiments"


@pytest.fixture(scope="module")
def registry():
    return ExperimentLoader(EXPERIMENTS).registry()


def _published(exp, n, metric):
    return exp.expected_for(n).values[metric]


def test_spliced_laplacian_on_ellipse(registry):
    exp = registry["splice-laplacian-ellipse"]
    result = run_experiment(exp, [64, 128])
    for n in (64, 128):
        row = result.row(n)
        assert row.values["linf"] <= 2.0 * _published(exp, n, "linf")
        assert row.values["l2"] <= 2.0 * _published(exp, n, "l2")
    assert result.rates("linf")[1] >= 1.9


def test_poisson_circle_log(registry):
    exp = registry["poisson-circle-log"]
    result = run_experiment(exp, [40, 80, 160])
    for n in (40, 80, 160):
        assert result.row(n).values["linf"] <= 2.0 * _published(exp, n, "linf")
    assert result.rates("linf")[2] >= 1.9
    assert result.rates("l2")[2] >= 1.9


def test_circle_perimeter(registry):
    exp = registry["quadrature-circle-perimeter"]
    result = run_experiment(exp, [64, 128])
    assert result.row(64).values["error"] <= 2.0 * 5.422e-5
    assert result.average_rate("error") >= 3.5


def test_rows_above_cap_are_not_run(registry, monkeypatch):
    monkeypatch.setenv("MAX_N_2D", "64")
    from src.utils.config import get_settings

    get_settings.cache_clear()
    exp = registry["quadrature-circle-perimeter"]
    result = run_experiment(exp, [64, 128])
    assert result.row(128).status == STATUS_NOT_RUN
    assert result.series("error")[1] is None


def test_engine_golden_run_writes_csv(registry, tmp_path: Path):
    exp = registry["poisson-circle-exp"]
    outcome = Engine(out_dir=tmp_path, golden=True).run_experiment(exp, [40, 80, 160])
    assert outcome.ok, outcome.failures
    lines = outcome.csv_path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "n,linf,linf_rate,l2,l2_rate,status"
    assert [line.split(",")[0] for line in lines[1:]] == ["40", "80", "160"]


@pytest.mark.slow
def test_flow_pair_and_baseline(registry):
    exp = apply_override(registry["ns-ellipse-re10"], {"flow": {"final_time": 0.015625}})
    spliced = run_experiment(exp, [32, 64])
    fine = spliced.row(64).values
    assert spliced.row(32).values["E_u"] is None
    assert fine["E_u"] is not None and fine["E_p"] is not None and fine["E_phi"] is not None
    assert fine["E_vol"] < 1e-3
    assert set(spliced.volume_series) == {32, 64}
    assert spliced.pressure_slices[64][0][0] == pytest.approx(0.0)

    delta = run_delta_baseline(exp, [32, 64])
    assert delta.row(64).values["E_u"] is not None
