from pathlib import Path
import textwrap

import pytest

from src.core.errors import ExperimentError
from src.core.experiment_loader import (
    ExperimentKind,
    ExperimentLoader,
    apply_override,
    load_experiments_file,
    load_override,
)
from src.geometry.shapes import Circle, Stadium


def write_multi_doc_yaml(tmp_path: Path) -> Path:
    y = textwrap.dedent(
        """
        id: perimeter-small
        kind: quadrature_perimeter
        shape: {kind: circle, radius: 0.5}
        n_list: [32, 64]
        expected:
          - {n: 64, values: {error: 5.422e-5}, reference: "published perimeter sweep"}
        ---
        id: poisson-small
        kind: poisson
        shape: {kind: stadium, half_length: 0.3, radius: 0.2}
        solution: log_outside
        n_list: [20, 40]
        rate_floors:
          - {metric: linf, min: 1.9, from_n: 40}
        """
    )
    p = tmp_path / "demo.yaml"
    p.write_text(y, encoding="utf-8")
    return p


def test_load_experiments_file_multiple_docs(tmp_path: Path):
    experiments = load_experiments_file(write_multi_doc_yaml(tmp_path))
    assert [e.id for e in experiments] == ["perimeter-small", "poisson-small"]
    first, second = experiments
    assert first.kind == ExperimentKind.quadrature_perimeter and isinstance(first.shape, Circle)
    assert first.metrics == ["error"] and first.band_width_cells == 14.0
    assert first.expected_for(64).values["error"] == pytest.approx(5.422e-5)
    assert first.expected_for(32) is None
    assert isinstance(second.shape, Stadium) and second.band_width_cells == 12.0
    assert second.rate_floors[0].from_n == 40


def test_validation_errors_list_fields(tmp_path: Path):
    f = tmp_path / "bad.yaml"
    f.write_text(
        textwrap.dedent(
            """
            id: Bad Id
            kind: poisson
            shape: {kind: circle}
            n_list: [64, 32]
            """
        ),
        encoding="utf-8",
    )
    with pytest.raises(ValueError) as ei:
        load_experiments_file(f)
    msg = str(ei.value)
    assert "document 1" in msg
    assert "  - id:" in msg and "  - n_list:" in msg


def test_kind_requirements(tmp_path: Path):
    f = tmp_path / "nosol.yaml"
    f.write_text("id: p\nkind: poisson\nshape: {kind: circle}\nn_list: [16]\n", encoding="utf-8")
    with pytest.raises(ValueError, match="needs a 'solution'"):
        load_experiments_file(f)


def test_env_substitution(tmp_path: Path, monkeypatch):
    monkeypatch.setenv("SPLICE_TITLE", "from env")
    f = tmp_path / "env.yaml"
    f.write_text(
        "id: q\ntitle: ${SPLICE_TITLE}\nkind: quadrature_perimeter\nshape: {kind: circle}\nn_list: [16]\n",
        encoding="utf-8",
    )
    assert load_experiments_file(f)[0].title == "from env"


def test_override_deep_merges_and_revalidates(tmp_path: Path):
    exp = load_experiments_file(write_multi_doc_yaml(tmp_path))[0]
    changed = apply_override(exp, {"shape": {"radius": 0.25}, "n_list": [16, 32]})
    assert changed.shape.radius == 0.25 and changed.shape.kind == "circle"
    assert changed.n_list == [16, 32]
    with pytest.raises(ValueError, match="Invalid override"):
        apply_override(exp, {"q": 7})

    o = tmp_path / "override.yaml"
    o.write_text("band_cells: 16\n", encoding="utf-8")
    assert apply_override(exp, load_override(o)).band_width_cells == 16.0


def test_loader_registry_and_unknown_id(tmp_path: Path):
    write_multi_doc_yaml(tmp_path)
    (tmp_path / "broken.yaml").write_text("id: [\n", encoding="utf-8")
    loader = ExperimentLoader(tmp_path)
    assert set(loader.registry()) == {"perimeter-small", "poisson-small"}
    with pytest.raises(ExperimentError) as ei:
        loader.get("nope")
    assert ei.value.known == ["perimeter-small", "poisson-small"]
    assert "unknown experiment 'nope'" in str(ei.value)
    with pytest.raises(ValueError):
        loader.load_directory(strict=True)


def test_bundled_experiments_validate():
    root = Path(__file__).resolve().parents[2] / "experiments"
    experiments = ExperimentLoader(root).load_directory(strict=True)
    ids = {e.id for e in experiments}
    assert {"splice-laplacian-ellipse", "poisson-circle-log", "quadrature-circle-perimeter", "ns-ellipse-re10"} <= ids
