# test_willis.py

import numpy as np
import pytest

from gammaform.errors import LayoutError, MaterialError, RecoveryError, ResonanceError
from gammaform.sampling import make_generator
from gammaform.willis import (
    ReducedKernels,
    WillisModuli,
    eigenstrain_solve,
    equivalence_check,
    full_solve,
    lattice,
    random_moduli,
    recover_zero_coupling,
    reduce,
    reduce_Gf,
    reduce_Gsigma,
    resonance_mask,
    transcribed_Gf,
    write_kernels_csv,
)


def random_lattice(rng, size):
    return rng.uniform(0.1, 10.0, size), rng.uniform(0.1, 10.0, size)


def test_kernel_examples():
    m = WillisModuli(2.0, 3.0, 5.0, 1.0 + 2.0j, 1.0)
    assert reduce_Gf(m)[0] == pytest.approx(-1.0)
    assert reduce_Gsigma(m)[0] == pytest.approx(6.0 + 7.0j)


def test_kernel_limits():
    static = WillisModuli([1.0, 2.0], [0.0, 0.0], 3.0, 1.0 + 1.0j, 2.0)
    np.testing.assert_allclose(reduce_Gf(static), [3.0, 12.0])
    imaginary = WillisModuli(2.0, 1.0, 1.0, 4.0j, 1.0)
    assert reduce_Gf(imaginary)[0] == pytest.approx(4.0 - 1.0)
    at_rest = WillisModuli(0.0, 2.0, 1.0, 1.0 + 1.0j, 1.0)
    assert reduce_Gsigma(at_rest)[0] == pytest.approx(-2.0j * (1.0 + 1.0j))


def test_full_solve_matches_reduced_kernel():
    rng = make_generator(2024)
    k, omega = random_lattice(rng, 500)
    m = random_moduli(rng, k, omega)
    f_hat = rng.standard_normal(500) + 1j * rng.standard_normal(500)
    u, sigma, p, eps = full_solve(m, f_hat)
    expected = f_hat / reduce_Gf(m)
    assert np.all(np.abs(u - expected) <= 1e-10 * (1.0 + np.abs(u)))
    np.testing.assert_allclose(eps, 1j * m.k * u, rtol=1e-12)
    momentum = 1j * m.k * sigma + 1j * m.omega * p + f_hat
    scale = 1.0 + np.abs(m.k * sigma) + np.abs(m.omega * p) + np.abs(f_hat)
    assert np.max(np.abs(momentum) / scale) <= 1e-12


def test_zero_force_gives_zero_fields():
    m = WillisModuli([1.0, 2.0], [0.5, 0.5], 2.0, 0.3, 1.0)
    for values in full_solve(m, 0.0):
        np.testing.assert_array_equal(values, 0.0)


def test_resonance_raises_with_its_point():
    m = WillisModuli(1.0, 1.0, 1.0, 0.0, 1.0)
    assert resonance_mask(m)[0]
    with pytest.raises(ResonanceError) as info:
        full_solve(m, 1.0)
    assert (info.value.k, info.value.omega) == (1.0, 1.0)
    with pytest.raises(ResonanceError):
        eigenstrain_solve(m, 1.0, 0.0)


def test_transcribed_convention_follows_its_own_kernel():
    m = WillisModuli(1.5, 0.7, 2.0, 0.4 + 0.3j, 1.0)
    u, *_ = full_solve(m, 1.0, convention="transcribed")
    assert u[0] == pytest.approx(1.0 / transcribed_Gf(m)[0], rel=1e-12)
    with pytest.raises(MaterialError):
        full_solve(m, 1.0, convention="other")


def test_imaginary_shift_of_coupling():
    rng = make_generator(5)
    k, omega = random_lattice(rng, 50)
    m = random_moduli(rng, k, omega)
    shifted = WillisModuli(k, omega, m.C, m.S + 0.7j, m.rho)
    np.testing.assert_allclose(reduce_Gf(shifted), reduce_Gf(m), rtol=1e-12, atol=1e-12)
    assert np.all(np.abs(reduce_Gsigma(shifted) - reduce_Gsigma(m)) > 1e-3)


class TestRecovery:
    def test_round_trip_without_coupling(self):
        m = WillisModuli(0.8, 1.3, 5.0, 0.0, 1.0)
        recovered = recover_zero_coupling(reduce(m))
        assert recovered.C[0] == pytest.approx(5.0, rel=1e-12)
        assert recovered.rho[0] == pytest.approx(1.0, rel=1e-12)

    def test_coupled_moduli_land_in_the_same_class(self):
        rng = make_generator(11)
        k, omega = random_lattice(rng, 40)
        m = random_moduli(rng, k, omega)
        recovered = recover_zero_coupling(reduce(m))
        np.testing.assert_array_equal(recovered.S, 0.0)
        assert not np.allclose(recovered.C, m.C)
        equivalent, deviation = equivalence_check(m, recovered)
        assert equivalent

    def test_kernel_only_input(self):
        r = ReducedKernels(np.array([2.0]), np.array([3.0]), np.array([-9.0 + 0j]), np.array([0j]))
        recovered = recover_zero_coupling(r)
        assert recovered.C[0] == 0.0
        assert recovered.rho[0] == pytest.approx(1.0)

    @pytest.mark.parametrize("k, omega", [(0.0, 1.0), (1.0, 0.0)])
    def test_undefined_points(self, k, omega):
        r = ReducedKernels(np.array([k]), np.array([omega]), np.array([1.0 + 0j]), np.array([1.0 + 0j]))
        with pytest.raises(RecoveryError):
            recover_zero_coupling(r)


def test_eigenstrain_superposition():
    rng = make_generator(8)
    k, omega = random_lattice(rng, 30)
    m = random_moduli(rng, k, omega)
    f1, f2, u1, u2 = (rng.standard_normal(30) + 1j * rng.standard_normal(30) for _ in range(4))
    combined = eigenstrain_solve(m, 2.0 * f1 + f2, 2.0 * u1 + u2)
    separate = 2.0 * eigenstrain_solve(m, f1, u1) + eigenstrain_solve(m, f2, u2)
    np.testing.assert_allclose(combined, separate, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(eigenstrain_solve(m, 0.0, u1), u1)
    np.testing.assert_allclose(eigenstrain_solve(m, f1, 0.0), full_solve(m, f1)[0], rtol=1e-10)


def test_equivalence_detects_real_shift():
    m = WillisModuli(*lattice([1.0, 2.0], [0.5, 1.5]), 2.0, 0.5, 1.0)
    assert equivalence_check(m, m) == (True, 0.0)
    shifted = WillisModuli(m.k, m.omega, m.C, m.S + 1.0, m.rho)
    assert not equivalence_check(m, shifted)[0]
    with pytest.raises(LayoutError):
        equivalence_check(m, WillisModuli([1.0], [0.5], 2.0, 0.5, 1.0))


def test_lattice_order_and_kernels_csv(tmp_path):
    k, omega = lattice([1.0, 2.0], [0.5, 1.5, 2.5])
    np.testing.assert_array_equal(k, [1.0, 1.0, 1.0, 2.0, 2.0, 2.0])
    np.testing.assert_array_equal(omega, [0.5, 1.5, 2.5] * 2)
    path = write_kernels_csv(reduce(WillisModuli(k, omega, 1.0, 0.0, 1.0)), tmp_path / "kernels.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "k,omega,Gf_re,Gf_im,Gsigma_re,Gsigma_im"
    assert len(lines) == 7


def test_moduli_must_be_finite():
    with pytest.raises(MaterialError):
        WillisModuli(1.0, 1.0, np.inf, 0.0, 1.0)
    with pytest.raises(LayoutError):
        WillisModuli([1.0, 2.0], [1.0], 1.0, 0.0, 1.0)
