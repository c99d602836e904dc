import json
import math
from pathlib import Path

import pytest

from src.harness.rates import average_rate, observed_rates
from src.harness.results import STATUS_NOT_RUN, ExperimentResult, ResultRow, write_summary


def _result() -> ExperimentResult:
    r = ExperimentResult("demo", ["linf", "l2"])
    r.rows = [
        ResultRow(32, {"linf": 4.0e-4, "l2": 1.0e-4}),
        ResultRow(64, {"linf": 1.0e-4, "l2": 2.5e-5}),
        ResultRow(128, {"linf": 2.5e-5, "l2": None}),
        ResultRow(256, status=STATUS_NOT_RUN, note="above desk-scale cap"),
    ]
    return r


def test_observed_rates():
    rates = observed_rates([64, 128, 256], [1e-4, 2.5e-5, 6.25e-6])
    assert rates[0] is None
    assert rates[1] == pytest.approx(2.0) and rates[2] == pytest.approx(2.0)
    assert observed_rates([10, 30], [9.0, 1.0])[1] == pytest.approx(math.log(9) / math.log(3))


def test_missing_errors_break_the_chain():
    assert observed_rates([8, 16, 32], [1.0, None, 0.25]) == [None, None, None]
    assert observed_rates([8, 16], [0.0, 1.0]) == [None, None]
    assert average_rate([8, 16], [1.0, None]) is None
    with pytest.raises(ValueError):
        observed_rates([8, 16], [1.0])


def test_result_series_skip_not_run_rows():
    r = _result()
    assert r.ns == [32, 64, 128, 256]
    assert r.series("linf") == [4.0e-4, 1.0e-4, 2.5e-5, None]
    assert r.rates("l2")[1] == pytest.approx(2.0)
    assert r.rates("l2")[2] is None
    assert r.average_rate("linf") == pytest.approx(2.0)


def test_csv_format(tmp_path: Path):
    path = _result().write_csv(tmp_path)
    assert path.name == "demo.csv"
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "n,linf,linf_rate,l2,l2_rate,status"
    assert lines[1] == "32,4.000000e-04,,1.000000e-04,,ok"
    assert lines[2] == "64,1.000000e-04,2.000,2.500000e-05,2.000,ok"
    assert lines[3] == "128,2.500000e-05,2.000,,,ok"
    assert lines[4] == "256,,,,,not run"


def test_flow_side_files(tmp_path: Path):
    r = ExperimentResult("flow", ["E_vol"], rows=[ResultRow(32, {"E_vol": 1e-5})])
    r.volume_series[32] = [(0.0, 0.1), (0.125, 0.1000001)]
    r.pressure_slices[32] = [(0.0, -1.0), (1.0, -1.0)]
    r.write_csv(tmp_path)
    vol = (tmp_path / "flow_volume.csv").read_text(encoding="utf-8").splitlines()
    assert vol[0] == "n,t,volume" and vol[2] == "32,1.250000e-01,1.000001e-01"
    assert (tmp_path / "flow_pressure_slice_n32.csv").exists()


def test_write_summary(tmp_path: Path):
    out = write_summary(tmp_path / "sub" / "summary.json", [_result().to_dict()])
    data = json.loads(out.read_text(encoding="utf-8"))
    row = data["results"][0]
    assert row["id"] == "demo"
    assert row["rows"][3]["status"] == "not run"
    assert row["average_rates"]["linf"] == pytest.approx(2.0)
