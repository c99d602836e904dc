import json
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from src.utils.logger import (
    attach_file_logger,
    bind,
    bound,
    current_context,
    detach_file_logger,
    get_logger,
    log_with_context,
    unbind,
)


def _lines(path):
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]


def test_bound_restores_previous_context():
    bind(run_id="r1")
    try:
        with bound(experiment="alpha"):
            assert current_context() == {"run_id": "r1", "experiment": "alpha"}
        assert current_context() == {"run_id": "r1"}
    finally:
        unbind("run_id")
    assert "run_id" not in current_context()


def test_file_logs_only_take_their_own_experiment(tmp_path):
    log = get_logger("tests.logger")
    ha = attach_file_logger(tmp_path / "alpha.log")
    hb = attach_file_logger(tmp_path / "beta.log")
    try:
        with bound(experiment="alpha"):
            log.warning("from alpha")
        with bound(experiment="beta"):
            log_with_context(log, n=np.int64(64)).warning("from beta")
    finally:
        detach_file_logger(ha)
        detach_file_logger(hb)

    a = _lines(tmp_path / "alpha.log")
    b = _lines(tmp_path / "beta.log")
    assert [r["msg"] for r in a] == ["from alpha"]
    assert [r["msg"] for r in b] == ["from beta"]
    assert b[0]["n"] == 64 and b[0]["experiment"] == "beta"


def test_worker_threads_do_not_share_bindings():
    def work(name):
        with bound(experiment=name):
            return current_context()["experiment"]

    with ThreadPoolExecutor(max_workers=4) as ex:
        names = list(ex.map(work, ["a", "b", "c", "d"]))
    assert names == ["a", "b", "c", "d"]
    assert "experiment" not in current_context()
