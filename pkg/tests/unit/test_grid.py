from pathlib import Path

import numpy as np
import pytest

from src.core.errors import GridError
from src.grid.grid import Centering, RefinementPair, ScalarField, VectorField, make_grid
from src.grid.io import dump_field, export_slice_csv, load_field
from src.grid.norms import interpolate_to, l2_norm, linf_norm, restrict_compare


def test_make_grid_rejects_non_square_domain():
    with pytest.raises(GridError, match="non-square"):
        make_grid(2, 16, (0.0, 0.0), (1.0, 2.0))


def test_cell_and_node_coordinates():
    g = make_grid(2, 8, 0.0, 1.0)
    assert g.h == pytest.approx(0.125)
    assert g.shape(Centering.cell) == (8, 8)
    assert g.shape(Centering.node) == (9, 9)
    assert g.index_to_coord((0, 0), Centering.cell) == pytest.approx((0.0625, 0.0625))
    for idx in [(0, 0), (3, 7), (8, 8)]:
        assert g.coord_to_index(g.index_to_coord(idx, Centering.node), Centering.node) == idx


def test_field_shape_is_checked():
    g = make_grid(2, 8, 0.0, 1.0)
    with pytest.raises(GridError):
        ScalarField(g, Centering.node, np.zeros((8, 8)))


def test_vector_components_share_mask():
    g = make_grid(2, 8, 0.0, 1.0)
    m = np.ones((8, 8), dtype=bool)
    other = m.copy()
    other[0, 0] = False
    with pytest.raises(GridError, match="identical mask"):
        VectorField((ScalarField(g, Centering.cell, np.zeros((8, 8)), m), ScalarField(g, Centering.cell, np.zeros((8, 8)), other)))


def test_norms_of_constant_field():
    g = make_grid(2, 8, 0.0, 1.0)
    f = ScalarField(g, Centering.node, np.full((9, 9), -2.0))
    assert linf_norm(f) == 2.0
    assert l2_norm(f) == pytest.approx(2.0 * 9 * g.h)


def test_norm_over_empty_mask_raises():
    g = make_grid(2, 8, 0.0, 1.0)
    f = ScalarField(g, Centering.node, np.ones((9, 9)))
    with pytest.raises(GridError, match="empty"):
        linf_norm(f, np.zeros((9, 9), dtype=bool))


def test_restrict_compare_shared_nodes_are_exact():
    coarse = ScalarField.sample(make_grid(2, 16, 0.0, 1.0), Centering.node, lambda x, y: np.sin(x) * y)
    fine = ScalarField.sample(make_grid(2, 32, 0.0, 1.0), Centering.node, lambda x, y: np.sin(x) * y)
    assert restrict_compare(fine, coarse) == pytest.approx(0.0, abs=1e-15)


def test_restrict_compare_cells_is_second_order():
    errs = []
    for n in (16, 32):
        fn = lambda x, y: np.exp(x) * np.cos(y)  # noqa: E731
        coarse = ScalarField.sample(make_grid(2, n, 0.0, 1.0), Centering.cell, fn)
        fine = ScalarField.sample(make_grid(2, 2 * n, 0.0, 1.0), Centering.cell, fn)
        errs.append(RefinementPair(coarse, fine).compare())
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)


def test_refinement_pair_requires_doubling():
    a = ScalarField.zeros(make_grid(2, 8, 0.0, 1.0), Centering.cell)
    b = ScalarField.zeros(make_grid(2, 12, 0.0, 1.0), Centering.cell)
    with pytest.raises(GridError):
        RefinementPair(a, b)


def test_interpolate_to_is_exact_for_linear_data():
    g = make_grid(2, 8, 0.0, 1.0)
    f = ScalarField.sample(g, Centering.cell, lambda x, y: 2.0 * x - y)
    pts = np.array([[0.3, 0.41], [0.77, 0.2]])
    assert interpolate_to(f, pts) == pytest.approx(2.0 * pts[:, 0] - pts[:, 1])


def test_dump_and_load_field(tmp_path: Path):
    g = make_grid(3, 4, -1.0, 1.0)
    mask = np.zeros((5, 5, 5), dtype=bool)
    mask[1:3] = True
    f = ScalarField(g, Centering.node, np.arange(125, dtype=float).reshape(5, 5, 5), mask)
    dump_field(tmp_path / "phi", f)
    back = load_field(tmp_path / "phi")
    assert back.grid == g and back.centering == Centering.node
    assert np.array_equal(back.data, f.data) and np.array_equal(back.mask, mask)


def test_load_field_detects_truncated_payload(tmp_path: Path):
    g = make_grid(2, 4, 0.0, 1.0)
    path = dump_field(tmp_path / "p", ScalarField.zeros(g, Centering.node))
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(GridError, match="bytes"):
        load_field(tmp_path / "p")


def test_export_slice_csv(tmp_path: Path):
    g = make_grid(2, 4, 0.0, 1.0)
    f = ScalarField.sample(g, Centering.node, lambda x, y: 10.0 * x + y)
    out = export_slice_csv(tmp_path / "slice.csv", f, along=1, at={0: 0.5})
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "coord,value"
    assert len(lines) == 6
    assert float(lines[-1].split(",")[1]) == pytest.approx(6.0)
