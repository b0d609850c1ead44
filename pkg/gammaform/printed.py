# printed.py
"""
Published closed-form projectors, transcribed as printed.

Each form is a claim to be checked against symbols.canonical_projector.
Where a printed formula admits more than one reading, each reading is a named
variant. One reading is supplied rather than transcribed: the Mindlin left
factor puts -k / sqrt(2) on the xx and yy gradient entries, a normalization
the printed factor leaves implicit. Every form returns the zero matrix where
its denominator vanishes.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import PhysicsError
from .layouts import layout_of
from .models import PhysicsId, SpectralPoint
from .symbols import check_point
from .tensor_core import block_diag

I2 = np.eye(2)
I3 = np.eye(3)

AS_PRINTED = "as-printed"
SINGLE_PREFACTOR = "single-prefactor"
NUMERIC_INVERSE = "numeric-inverse"
CLOSED_FORM = "closed-form"

VARIANTS = {
    PhysicsId.GRAD2_ELECTROSTATICS: (AS_PRINTED,),
    PhysicsId.GRAD2_ELASTICITY: (AS_PRINTED,),
    PhysicsId.KIRCHHOFF_LOVE: (AS_PRINTED,),
    PhysicsId.MINDLIN: (NUMERIC_INVERSE, CLOSED_FORM),
    PhysicsId.COSSERAT: (AS_PRINTED, SINGLE_PREFACTOR),
    PhysicsId.FLEXOELECTRIC: (AS_PRINTED,),
    PhysicsId.FLEXOMAGNETOELECTRIC: (AS_PRINTED,),
    PhysicsId.SEEPAGE: (AS_PRINTED,),
    PhysicsId.MHD_PERTURBED: (AS_PRINTED,),
}

# How block outer products are expanded onto vector-valued potentials; echoed
# into verification reports.
EXPANSIONS = {
    PhysicsId.GRAD2_ELECTROSTATICS: "V(k) = v v^H / (k^2 + k^4), v = (ik, -k k)",
    PhysicsId.GRAD2_ELASTICITY: "kron(V(k), I3): V acts on the gradient indices, displacement index last",
    PhysicsId.KIRCHHOFF_LOVE: "D D^H / (k^4 + omega^2), D = (-k k, -i omega)",
    PhysicsId.MINDLIN: (
        "B M^-1 B^H; B column psi_l: grad block -delta_ij k_l / sqrt(2), "
        "shear and rotation-rate blocks omega e_l; column w: shear block k, last entry omega"
    ),
    PhysicsId.COSSERAT: (
        "kron(a a^H, I3) / (k^2 + k^2 omega^2 + omega^4), a = (ik, omega k, -omega^2) on (grad u, grad v, dv/dt); "
        "plus prefactor * kron(S, I3) on (grad theta, dtheta/dt, theta), S = s s^H / (k^2 + omega^2 + 1), "
        "s = (ik, -i omega, 1)"
    ),
    PhysicsId.FLEXOELECTRIC: "blockdiag(V(k), kron(V(k), I3))",
    PhysicsId.FLEXOMAGNETOELECTRIC: "blockdiag(V(k), V(k), kron(V(k), I3))",
    PhysicsId.SEEPAGE: "v v^H / (omega^2 k^2 + k^2 + omega^2 + 1), v = (omega k, ik, -i omega, 1)",
    PhysicsId.MHD_PERTURBED: (
        "kron(S, I3) on (grad b, db/dt, b) plus U U^H / (k^4 + k^2 + omega^2 + 1), "
        "U = (-k k, kron(ik, I3), -i omega I3, I3) on (grad div v, grad v, dv/dt, v)"
    ),
}


def variants_of(physics) -> tuple:
    return VARIANTS[PhysicsId.parse(physics)]


def _outer_over(vector, denominator):
    if denominator == 0.0:
        return np.zeros((vector.size, vector.size), dtype=complex)
    return np.outer(vector, vector.conj()) / denominator


def gradient_projector(k) -> np.ndarray:
    """The 12 x 12 rank-one projector V(k) of the second-gradient dielectric."""
    v = np.concatenate([1j * k, -np.outer(k, k).reshape(-1)])
    k2 = float(k @ k)
    return _outer_over(v, k2 + k2 ** 2)


def _kirchhoff_love(k, omega, variant):
    d = np.concatenate([-np.outer(k, k).reshape(-1), [-1j * omega]])
    k2 = float(k @ k)
    return _outer_over(d, k2 ** 2 + omega ** 2)


def mindlin_left_factor(k, omega) -> np.ndarray:
    b = np.zeros((9, 3), dtype=complex)
    b[0, 0:2] = b[3, 0:2] = -k / np.sqrt(2.0)
    b[4:6, 0:2] = omega * I2
    b[4:6, 2] = k
    b[6:8, 0:2] = omega * I2
    b[8, 2] = omega
    return b


def mindlin_middle_matrix(k, omega) -> np.ndarray:
    middle = np.zeros((3, 3))
    middle[0:2, 0:2] = np.outer(k, k) + 2.0 * omega ** 2 * I2
    middle[0:2, 2] = middle[2, 0:2] = omega * k
    middle[2, 2] = float(k @ k) + omega ** 2
    return middle


def mindlin_closed_form_inverse(k, omega) -> np.ndarray:
    """The printed closed form of the middle inverse, with constants c1, c2, c3."""
    if omega == 0.0:
        raise PhysicsError("closed-form middle inverse divides by omega; omega must be nonzero")
    k2 = float(k @ k)
    c1 = -omega ** 2 / (k2 ** 2 + 2.0 * omega ** 2 + 2.0 * omega ** 4)
    c2 = -(k2 + 2.0 * omega ** 2) * c1 / omega
    c3 = 1.0 - omega * k2 * c2 / (k2 + omega ** 2)
    inverse = np.zeros((3, 3))
    inverse[0:2, 0:2] = c1 * np.outer(k, k) + omega ** 2 * I2
    inverse[0:2, 2] = inverse[2, 0:2] = c2 * k
    inverse[2, 2] = c3
    return inverse


def _mindlin(k, omega, variant):
    b = mindlin_left_factor(k, omega)
    if not b.any():
        return np.zeros((9, 9), dtype=complex)
    if variant == CLOSED_FORM:
        middle_inverse = mindlin_closed_form_inverse(k, omega)
        return b @ middle_inverse @ b.conj().T
    middle = mindlin_middle_matrix(k, omega)
    try:
        solved = scipy.linalg.solve(middle, b.conj().T, assume_a="pos")
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        solved = np.linalg.pinv(middle) @ b.conj().T
    return b @ solved


def _cosserat(k, omega, variant):
    k2 = float(k @ k)
    a = np.concatenate([1j * k, omega * k, [-omega ** 2]])
    gamma = np.zeros((36, 36), dtype=complex)
    gamma[0:21, 0:21] = np.kron(_outer_over(a, k2 + k2 * omega ** 2 + omega ** 4), I3)
    rotation_norm = k2 + omega ** 2 + 1.0
    s = np.concatenate([1j * k, [-1j * omega, 1.0]])
    s_block = np.kron(_outer_over(s, rotation_norm), I3)
    if variant == AS_PRINTED:
        s_block = s_block / rotation_norm
    gamma[21:36, 21:36] = s_block
    return gamma


def _grad2_electrostatics(k, omega, variant):
    return gradient_projector(k)


def _grad2_elasticity(k, omega, variant):
    return np.kron(gradient_projector(k), I3)


def _flexoelectric(k, omega, variant):
    v = gradient_projector(k)
    return block_diag(v, np.kron(v, I3))


def _flexomagnetoelectric(k, omega, variant):
    v = gradient_projector(k)
    return block_diag(v, v, np.kron(v, I3))


def _seepage(k, omega, variant):
    v = np.concatenate([omega * k, 1j * k, [-1j * omega, 1.0]])
    k2 = float(k @ k)
    return _outer_over(v, omega ** 2 * k2 + k2 + omega ** 2 + 1.0)


def _mhd_perturbed(k, omega, variant):
    k2 = float(k @ k)
    gamma = np.zeros((33, 33), dtype=complex)
    s = np.concatenate([1j * k, [-1j * omega, 1.0]])
    gamma[0:15, 0:15] = np.kron(_outer_over(s, 1.0 + k2 + omega ** 2), I3)
    u = np.vstack([
        -np.outer(k, k),
        np.kron(1j * k[:, None], I3),
        -1j * omega * I3,
        I3,
    ])
    gamma[15:33, 15:33] = u @ u.conj().T / (k2 ** 2 + k2 + omega ** 2 + 1.0)
    return gamma


_FORMS = {
    PhysicsId.GRAD2_ELECTROSTATICS: _grad2_electrostatics,
    PhysicsId.GRAD2_ELASTICITY: _grad2_elasticity,
    PhysicsId.KIRCHHOFF_LOVE: _kirchhoff_love,
    PhysicsId.MINDLIN: _mindlin,
    PhysicsId.COSSERAT: _cosserat,
    PhysicsId.FLEXOELECTRIC: _flexoelectric,
    PhysicsId.FLEXOMAGNETOELECTRIC: _flexomagnetoelectric,
    PhysicsId.SEEPAGE: _seepage,
    PhysicsId.MHD_PERTURBED: _mhd_perturbed,
}


def printed_projector(physics, pt: SpectralPoint, variant: str = None) -> np.ndarray:
    """
    Evaluate the published projector of one physics at (k, omega).

    Args:
        physics: physics identifier.
        pt: spectral point.
        variant: reading of the formula; defaults to the first of variants_of(physics).
    """
    physics = PhysicsId.parse(physics)
    available = VARIANTS[physics]
    if variant is None:
        variant = available[0]
    if variant not in available:
        raise PhysicsError(f"{physics} has no printed form '{variant}' (available: {', '.join(available)})")
    check_point(physics, pt)
    gamma = _FORMS[physics](pt.wavevector, pt.omega, variant)
    n = layout_of(physics).total_dim
    return np.asarray(gamma, dtype=complex).reshape(n, n)


def mindlin_middle_inverse_check(pt: SpectralPoint) -> float:
    """Frobenius deviation of (closed-form inverse) x (middle matrix) from I."""
    check_point(PhysicsId.MINDLIN, pt)
    k, omega = pt.wavevector, pt.omega
    middle = mindlin_middle_matrix(k, omega)
    if abs(np.linalg.det(middle)) <= 1e-14 * max(1.0, np.linalg.norm(middle)) ** 3:
        raise PhysicsError(f"mindlin middle matrix is singular at k={pt.k}, omega={omega:g}")
    closed = mindlin_closed_form_inverse(k, omega)
    return float(np.linalg.norm(closed @ middle - np.eye(3)))


def mindlin_numeric_inverse_defect(pt: SpectralPoint) -> float:
    middle = mindlin_middle_matrix(pt.wavevector, pt.omega)
    return float(np.linalg.norm(np.linalg.inv(middle) @ middle - np.eye(3)))


def mindlin_gram_defect(pt: SpectralPoint) -> float:
    """Deviation of the middle matrix from B^H B, B the printed left factor."""
    b = mindlin_left_factor(pt.wavevector, pt.omega)
    middle = mindlin_middle_matrix(pt.wavevector, pt.omega)
    return float(np.linalg.norm(b.conj().T @ b - middle))
