# test_tensor_core.py

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gammaform.errors import LayoutError
from gammaform.layouts import layout_of
from gammaform.sampling import make_generator, random_complex
from gammaform.tensor_core import (
    alternating_map,
    flatten,
    hermiticity_defect,
    idempotency_defect,
    inner_product,
    isotropic_projectors,
    isotropic_tensor,
    orthonormal_range,
    projector_from_columns,
    unflatten,
)


def test_flatten_orders_blocks_row_major():
    layout = layout_of("grad2-electrostatics")
    hess = np.arange(9.0).reshape(3, 3)
    vector = flatten([[1.0, 2.0, 3.0], hess], layout)
    np.testing.assert_array_equal(vector, [1.0, 2.0, 3.0] + list(range(9)))
    grad, back = unflatten(vector, layout)
    np.testing.assert_array_equal(back, hess)
    np.testing.assert_array_equal(grad, [1.0, 2.0, 3.0])


def test_flatten_rejects_wrong_block_shape():
    layout = layout_of("grad2-electrostatics")
    with pytest.raises(LayoutError):
        flatten([np.zeros(3), np.zeros((3, 2))], layout)
    with pytest.raises(LayoutError):
        flatten([np.zeros(3)], layout)


def test_inner_product_is_conjugate_linear_in_first_argument():
    x = np.array([1j, 2.0])
    y = np.array([1.0, 1.0])
    assert inner_product(x, y) == pytest.approx(2.0 - 1j)
    with pytest.raises(LayoutError):
        inner_product(np.zeros(2), np.zeros(3))


def test_orthonormal_range_detects_rank():
    rng = make_generator(5)
    base = random_complex(rng, (6, 2))
    matrix = np.hstack([base, base @ np.array([[1.0], [2.0]])])
    basis = orthonormal_range(matrix)
    assert basis.shape == (6, 2)
    np.testing.assert_allclose(basis.conj().T @ basis, np.eye(2), atol=1e-12)
    assert orthonormal_range(np.zeros((4, 3))).shape == (4, 0)


@settings(deadline=None, max_examples=25)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1), rows=st.integers(2, 12), cols=st.integers(1, 4))
def test_projector_from_columns_is_orthogonal_projector(seed, rows, cols):
    rng = make_generator(seed)
    columns = random_complex(rng, (rows, min(cols, rows)))
    projector = projector_from_columns(columns)
    assert idempotency_defect(projector) <= 1e-10
    assert hermiticity_defect(projector) <= 1e-12
    np.testing.assert_allclose(projector @ columns, columns, atol=1e-10 * np.linalg.norm(columns))


def test_oblique_projector_fails_hermiticity():
    oblique = np.array([[1.0, 1.0], [0.0, 0.0]])
    assert idempotency_defect(oblique) == 0.0
    assert hermiticity_defect(oblique) >= 0.5
    assert hermiticity_defect(projector_from_columns(oblique)) <= 1e-12


@pytest.mark.parametrize("d", [2, 3])
def test_isotropic_projectors_partition_identity(d):
    proj = isotropic_projectors(d)
    parts = [proj.lambda_h, proj.lambda_s, proj.lambda_a]
    np.testing.assert_allclose(sum(parts), np.eye(d * d), atol=1e-14)
    for i, first in enumerate(parts):
        assert idempotency_defect(first) <= 1e-14
        assert hermiticity_defect(first) == 0.0
        for second in parts[i + 1:]:
            np.testing.assert_allclose(first @ second, 0.0, atol=1e-14)


def test_isotropic_projectors_reject_other_dimensions():
    with pytest.raises(LayoutError):
        isotropic_projectors(4)


def test_isotropic_tensor_on_identity_and_deviator():
    c = isotropic_tensor(3, bulk=2.0, shear=5.0)
    identity = np.eye(3).reshape(-1)
    np.testing.assert_allclose(c @ identity, 3 * 2.0 * identity, atol=1e-13)
    deviator = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]).reshape(-1)
    np.testing.assert_allclose(c @ deviator, 2 * 5.0 * deviator, atol=1e-13)


def test_alternating_map_picks_axial_vector():
    eta = alternating_map()
    w = np.array([1.0, -2.0, 0.5])
    skew = np.array([[0.0, w[2], -w[1]], [-w[2], 0.0, w[0]], [w[1], -w[0], 0.0]])
    np.testing.assert_allclose(eta @ skew.reshape(-1), 2.0 * w)
    np.testing.assert_allclose(eta @ eta.T, 2.0 * np.eye(3))
    np.testing.assert_allclose(eta @ np.eye(3).reshape(-1), 0.0)
