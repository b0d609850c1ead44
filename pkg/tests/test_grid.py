# test_grid.py

import numpy as np
import pytest

from gammaform.errors import LayoutError
from gammaform.grid import (
    Grid,
    GridField,
    checkerboard,
    field_header,
    homogeneous,
    laminate,
    read_field_csv,
    write_field_csv,
)
from gammaform.layouts import layout_of


def test_wavevectors_drop_nyquist():
    ks = Grid((4,), cell_size=0.5).wavevectors(3)
    assert ks.shape == (4, 3)
    np.testing.assert_allclose(ks[:, 0], [0.0, np.pi, 0.0, -np.pi])
    np.testing.assert_array_equal(ks[:, 1:], 0.0)


def test_odd_axis_keeps_every_frequency():
    ks = Grid((3, 2)).wavevectors(2)
    assert np.count_nonzero(ks[:, 0]) == 4
    np.testing.assert_array_equal(ks[:, 1], 0.0)


def test_grid_rejects_bad_shapes():
    with pytest.raises(LayoutError):
        Grid((1, 4))
    with pytest.raises(LayoutError):
        Grid((2, 2, 2, 2))
    with pytest.raises(LayoutError):
        Grid((4, 4)).wavevectors(1)


def test_fourier_transform_is_unitary(rng, grid_8x8):
    layout = layout_of("seepage")
    values = rng.standard_normal(grid_8x8.cells + (8,))
    field = GridField(grid_8x8, layout, values)
    spectrum = field.to_fourier()
    assert spectrum.norm() == pytest.approx(field.norm())
    np.testing.assert_allclose(spectrum.to_space().values, values, atol=1e-12)
    np.testing.assert_allclose(spectrum.values[0, 0], values.reshape(-1, 8).mean(axis=0) * 8.0)


def test_constant_field_and_mean(grid_8x8):
    layout = layout_of("kirchhoff-love")
    field = GridField.constant(grid_8x8, layout, np.arange(5.0))
    np.testing.assert_allclose(field.mean(), np.arange(5.0))
    assert field.block("dv_dt").shape == (8, 8, 1)
    with pytest.raises(LayoutError):
        GridField.constant(grid_8x8, layout, np.ones(4))


def test_phase_maps():
    board = checkerboard((4, 4))
    assert board.sum() == 8
    assert board[0, 0] == 0 and board[0, 2] == 1 and board[2, 2] == 0
    layers = laminate((4, 2), axis=0)
    np.testing.assert_array_equal(layers[:, 0], [0, 0, 1, 1])
    np.testing.assert_array_equal(homogeneous((3,)), [0, 0, 0])


def test_csv_keeps_real_fields(tmp_path, rng, grid_8x8):
    layout = layout_of("kirchhoff-love")
    field = GridField(grid_8x8, layout, rng.standard_normal(grid_8x8.cells + (5,)))
    path = write_field_csv(field, tmp_path / "E.csv")
    assert path.read_text().splitlines()[0] == "cell_index,comp_0,comp_1,comp_2,comp_3,comp_4"
    loaded = read_field_csv(path, grid_8x8, layout)
    assert loaded.is_real
    np.testing.assert_array_equal(loaded.values, field.values)


def test_csv_splits_complex_fields(tmp_path, grid_1d):
    layout = layout_of("kirchhoff-love")
    values = np.zeros(grid_1d.cells + (5,), dtype=complex)
    values[..., 4] = 1.0 + 2.0j
    field = GridField(grid_1d, layout, values)
    assert field_header(field)[-2:] == ["comp_4_re", "comp_4_im"]
    loaded = read_field_csv(write_field_csv(field, tmp_path / "J.csv"), grid_1d, layout)
    np.testing.assert_array_equal(loaded.values, values)


def test_csv_cell_count_checked(tmp_path, grid_8x8):
    layout = layout_of("seepage")
    path = write_field_csv(GridField.zeros(Grid((4, 4)), layout), tmp_path / "small.csv")
    with pytest.raises(LayoutError):
        read_field_csv(path, grid_8x8, layout)
