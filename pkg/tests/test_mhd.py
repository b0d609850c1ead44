# test_mhd.py

import numpy as np
import pytest

from gammaform.errors import MaterialError
from gammaform.layouts import layout_of
from gammaform.mhd import MhdBackground, build_mhd_L, eta_of_gradb
from gammaform.tensor_core import isotropic_projectors

LAYOUT = layout_of("mhd-perturbed")


def flowing_background(**overrides):
    values = dict(
        b=[0.3, -0.2, 1.0],
        v=[0.5, 0.1, -0.4],
        rho=1.2,
        grad_b=np.arange(9.0).reshape(3, 3) / 10.0,
        grad_v=np.diag([0.1, 0.2, 0.3]),
        dv_dt=[0.0, 0.0, 1.0],
        mu0=1.0,
        sigma0=2.0,
        lambda_b=10.0,
        lambda_v=20.0,
    )
    values.update(overrides)
    return MhdBackground(**values)


def test_quiescent_law_is_block_sparse():
    law = build_mhd_L(MhdBackground.quiescent(rho=2.0, sigma0=0.5))
    assert law.matrix.shape == (33, 33)
    b_rows, v_rows = LAYOUT.block_slice("b"), LAYOUT.block_slice("v")
    np.testing.assert_allclose(law.matrix[b_rows, LAYOUT.block_slice("dv_dt")], -2.0 * np.eye(3))
    np.testing.assert_allclose(law.matrix[b_rows, LAYOUT.block_slice("db_dt")], -0.5 * np.eye(3))
    np.testing.assert_allclose(law.matrix[LAYOUT.block_slice("dv_dt"), v_rows], 2.0 * np.eye(3))
    np.testing.assert_array_equal(law.matrix[v_rows], 0.0)


def test_continuity_row_is_scalar():
    background = flowing_background()
    law = build_mhd_L(background)
    start = LAYOUT.block_slice("v").start
    np.testing.assert_allclose(law.matrix[start, LAYOUT.block_slice("grad_div_v")], -20.0 * background.v)
    np.testing.assert_allclose(
        law.matrix[start, LAYOUT.block_slice("grad_v")], -20.0 * 0.6 * np.eye(3).reshape(-1)
    )
    np.testing.assert_array_equal(law.matrix[start + 1:start + 3], 0.0)


def test_penalty_enters_the_hydrostatic_part():
    small = build_mhd_L(flowing_background(lambda_b=1.0))
    large = build_mhd_L(flowing_background(lambda_b=1e6))
    block = (LAYOUT.block_slice("grad_b"), LAYOUT.block_slice("grad_b"))
    difference = large.matrix[block] - small.matrix[block]
    np.testing.assert_allclose(difference, (1e6 - 1.0) * isotropic_projectors(3).lambda_h, atol=1e-6)


def test_background_defaults_follow_grad_v():
    background = flowing_background()
    assert background.div_v == pytest.approx(0.6)
    np.testing.assert_allclose(background.advective, background.grad_v.T @ background.v)


def test_eta_is_antisymmetric():
    grad_b = np.random.default_rng(0).standard_normal((3, 3))
    eta = eta_of_gradb(grad_b, mu0=2.0)
    np.testing.assert_allclose(eta, -eta.T)
    np.testing.assert_array_equal(eta_of_gradb(np.eye(3), 1.0), 0.0)


@pytest.mark.parametrize("overrides", [{"mu0": 0.0}, {"b": [1.0, 2.0]}, {"grad_v": np.eye(2)}, {"rho": np.nan}])
def test_invalid_background_rejected(overrides):
    with pytest.raises(MaterialError):
        flowing_background(**overrides)
