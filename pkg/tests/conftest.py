from pathlib import Path

import pytest

from src.geometry.band import NarrowBand, band_from_shape
from src.geometry.shapes import Circle
from src.grid.grid import Centering, Grid, make_grid
from src.utils.config import get_settings


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path: Path, monkeypatch):
    # keep results/logs of every test under its own tmp dir
    monkeypatch.setenv("OUTPUT_DIR", str(tmp_path / "results"))
    monkeypatch.setenv("EXPERIMENTS_DIR", str(tmp_path / "experiments"))
    monkeypatch.setenv("LOG_FILE", str(tmp_path / "splice-bench.log"))
    monkeypatch.setenv("SNAPSHOTS", "false")
    get_settings.cache_clear()
    yield get_settings()
    get_settings.cache_clear()


@pytest.fixture
def grid64() -> Grid:
    return make_grid(2, 64, -1.0, 1.0)


@pytest.fixture
def circle() -> Circle:
    return Circle(center=(0.0, 0.0), radius=0.5)


@pytest.fixture
def circle_band(grid64: Grid, circle: Circle) -> NarrowBand:
    return band_from_shape(circle, grid64, Centering.node, 12 * grid64.h)
