# symbols.py
"""
Potential-map symbols P(k, omega) and the canonical projectors built from them.

Fourier convention: grad -> ik, d/dt -> -i omega. Column j of P is the
flattened E-field generated by a unit amplitude of potential component j.
"""

from __future__ import annotations

import numpy as np

from .errors import LayoutError, PhysicsError
from .layouts import layout_of
from .models import PhysicsId, SpectralPoint
from .tensor_core import projector_from_columns

I2 = np.eye(2)
I3 = np.eye(3)


def _scalar_gradient_pair(k):
    """(grad V, grad grad V) of a unit scalar potential: (ik, -k k)."""
    return np.concatenate([1j * k, -np.outer(k, k).reshape(-1)])[:, None]


def _grad2_electrostatics(k, omega):
    return _scalar_gradient_pair(k)


def _grad2_elasticity(k, omega):
    # gradient indices first, displacement component last
    return np.kron(_scalar_gradient_pair(k), I3)


def _kirchhoff_love(k, omega):
    return np.concatenate([np.outer(k, k).reshape(-1), [-1j * omega]])[:, None]


def _mindlin(k, omega):
    p = np.zeros((9, 3), dtype=complex)
    p[0:4, 0:2] = omega * np.kron(k[:, None], I2)
    p[4:6, 0:2] = -1j * omega * I2
    p[4:6, 2] = -omega * k
    p[6:8, 0:2] = -1j * omega * I2
    p[8, 2] = -omega ** 2
    return p


def _cosserat(k, omega):
    p = np.zeros((36, 6), dtype=complex)
    p[0:9, 0:3] = np.kron(1j * k[:, None], I3)
    p[9:18, 0:3] = np.kron(omega * k[:, None], I3)
    p[18:21, 0:3] = -omega ** 2 * I3
    p[21:30, 3:6] = np.kron(1j * k[:, None], I3)
    p[30:33, 3:6] = -1j * omega * I3
    p[33:36, 3:6] = I3
    return p


def _flexoelectric(k, omega):
    p = np.zeros((48, 4), dtype=complex)
    p[0:12, 0:1] = -_scalar_gradient_pair(k)
    p[12:48, 1:4] = _grad2_elasticity(k, omega)
    return p


def _flexomagnetoelectric(k, omega):
    p = np.zeros((60, 5), dtype=complex)
    p[0:12, 0:1] = -_scalar_gradient_pair(k)
    p[12:24, 1:2] = -_scalar_gradient_pair(k)
    p[24:60, 2:5] = _grad2_elasticity(k, omega)
    return p


def _seepage(k, omega):
    return np.concatenate([omega * k, 1j * k, [-1j * omega, 1.0]])[:, None]


def _mhd_perturbed(k, omega):
    p = np.zeros((33, 6), dtype=complex)
    p[0:9, 0:3] = np.kron(1j * k[:, None], I3)
    p[9:12, 0:3] = -1j * omega * I3
    p[12:15, 0:3] = I3
    p[15:18, 3:6] = -np.outer(k, k)
    p[18:27, 3:6] = np.kron(1j * k[:, None], I3)
    p[27:30, 3:6] = -1j * omega * I3
    p[30:33, 3:6] = I3
    return p


_SYMBOLS = {
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


def check_point(physics: PhysicsId, pt: SpectralPoint):
    layout = layout_of(physics)
    if pt.dim != layout.spatial_dim:
        raise LayoutError(f"{physics} needs a {layout.spatial_dim}-d wavevector, got {pt.dim}-d")
    if physics.is_static and pt.omega != 0.0:
        raise PhysicsError(f"{physics} is static: omega must be 0, got {pt.omega:g}")


def physics_is_dynamic(physics) -> bool:
    return not PhysicsId.parse(physics).is_static


def potential_symbol(physics, pt: SpectralPoint) -> np.ndarray:
    """N x p matrix mapping potential amplitudes to the flattened E-field at (k, omega)."""
    physics = PhysicsId.parse(physics)
    check_point(physics, pt)
    symbol = _SYMBOLS[physics](pt.wavevector, pt.omega)
    return np.asarray(symbol, dtype=complex)


def canonical_projector(physics, pt: SpectralPoint) -> np.ndarray:
    """Orthogonal projector onto range P(k, omega); zero at k = 0, omega = 0."""
    physics = PhysicsId.parse(physics)
    symbol = potential_symbol(physics, pt)
    if pt.is_degenerate:
        n = symbol.shape[0]
        return np.zeros((n, n), dtype=complex)
    return projector_from_columns(symbol)


def gamma2(physics, pt: SpectralPoint) -> np.ndarray:
    gamma1 = canonical_projector(physics, pt)
    return np.eye(gamma1.shape[0]) - gamma1


def constraint_residual(physics, j_hat, pt: SpectralPoint) -> np.ndarray:
    """P(k, omega)^dagger J; zero iff J satisfies the differential constraints at this mode."""
    physics = PhysicsId.parse(physics)
    j_hat = np.asarray(j_hat)
    n = layout_of(physics).total_dim
    if j_hat.shape != (n,):
        raise LayoutError(f"{physics} flux must have length {n}, got {j_hat.shape}")
    return potential_symbol(physics, pt).conj().T @ j_hat


MEAN_POLICIES = ("fluctuation", "retain")


def mode_projector(physics, pt: SpectralPoint, is_mean: bool = False, mean_policy: str = "fluctuation") -> np.ndarray:
    """
    Projector applied to one grid mode.

    The mean mode is zeroed under "fluctuation". Under "retain" static
    physics pass it through unchanged, dynamic physics use the k = 0 limit
    P(0, omega) (identity when that limit vanishes too).
    """
    physics = PhysicsId.parse(physics)
    if mean_policy not in MEAN_POLICIES:
        raise PhysicsError(f"mean policy must be one of {MEAN_POLICIES}, got '{mean_policy}'")
    if not is_mean:
        return canonical_projector(physics, pt)
    n = layout_of(physics).total_dim
    if mean_policy == "fluctuation":
        return np.zeros((n, n), dtype=complex)
    limit = canonical_projector(physics, pt) if physics_is_dynamic(physics) else np.zeros((n, n))
    if not limit.any():
        return np.eye(n, dtype=complex)
    return limit
