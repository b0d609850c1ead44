# tensor_core.py
"""Layout bookkeeping, small dense complex linear algebra and isotropic projectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import LayoutError
from .models import FieldLayout

RANK_TOLERANCE = 1e-10


def flatten(block_values, layout: FieldLayout) -> np.ndarray:
    """
    Concatenate the blocks of a field into its N-vector.

    Args:
        block_values: one array-like per layout block, in layout order.
        layout: the target layout.

    Returns:
        The N-vector, row-major within each block. Complex if any block is.
    """
    block_values = list(block_values)
    if len(block_values) != len(layout.blocks):
        raise LayoutError(
            f"{layout.physics} expects {len(layout.blocks)} blocks, got {len(block_values)}"
        )
    parts = []
    for spec, value in zip(layout.blocks, block_values):
        value = np.asarray(value)
        if value.shape != spec.shape:
            raise LayoutError(f"block '{spec.name}' must have shape {spec.shape}, got {value.shape}")
        parts.append(value.reshape(-1))
    return np.concatenate(parts)


def unflatten(vector, layout: FieldLayout) -> list:
    vector = np.asarray(vector)
    if vector.shape != (layout.total_dim,):
        raise LayoutError(f"{layout.physics} vector must have length {layout.total_dim}, got {vector.shape}")
    return [vector[layout.block_slice(spec.name)].reshape(spec.shape) for spec in layout.blocks]


def inner_product(x, y) -> complex:
    """Unweighted componentwise inner product, conjugate-linear in x."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise LayoutError(f"inner product of mismatched fields {x.shape} and {y.shape}")
    return complex(np.vdot(x, y))


def orthonormal_range(matrix, rel_tol: float = RANK_TOLERANCE) -> np.ndarray:
    """
    Orthonormal basis of the numerical column space, via column-pivoted QR.

    Columns whose pivot falls below rel_tol times the largest column norm are
    treated as dependent. A zero matrix yields an N x 0 basis.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim == 1:
        matrix = matrix[:, None]
    rows = matrix.shape[0]
    if matrix.size == 0:
        return np.zeros((rows, 0), dtype=complex)
    largest = np.max(np.linalg.norm(matrix, axis=0))
    if largest == 0.0:
        return np.zeros((rows, 0), dtype=complex)
    q, r, _ = scipy.linalg.qr(matrix, mode="economic", pivoting=True)
    rank = int(np.count_nonzero(np.abs(np.diag(r)) > rel_tol * largest))
    return q[:, :rank]


def projector_from_columns(matrix) -> np.ndarray:
    """Orthogonal projector onto the column space of matrix."""
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim == 1:
        matrix = matrix[:, None]
    basis = orthonormal_range(matrix)
    return basis @ basis.conj().T


def transpose_map(d: int) -> np.ndarray:
    """Permutation acting as M -> M^T on row-major flattened d x d matrices."""
    t = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            t[i * d + j, j * d + i] = 1.0
    return t


@dataclass(frozen=True)
class IsotropicProjectors:
    """Projections onto multiples of I, trace-free symmetric and antisymmetric matrices."""

    lambda_h: np.ndarray
    lambda_s: np.ndarray
    lambda_a: np.ndarray


def isotropic_projectors(d: int) -> IsotropicProjectors:
    if d not in (2, 3):
        raise LayoutError(f"isotropic projectors need d in (2, 3), got {d}")
    identity = np.eye(d * d)
    swap = transpose_map(d)
    vec_i = np.eye(d).reshape(-1)
    lambda_h = np.outer(vec_i, vec_i) / d
    lambda_s = 0.5 * (identity + swap) - lambda_h
    lambda_a = 0.5 * (identity - swap)
    return IsotropicProjectors(lambda_h=lambda_h, lambda_s=lambda_s, lambda_a=lambda_a)


def isotropic_tensor(d: int, bulk: float, shear: float) -> np.ndarray:
    """d*bulk*Lambda_h + 2*shear*Lambda_s as a d^2 x d^2 matrix."""
    proj = isotropic_projectors(d)
    return d * bulk * proj.lambda_h + 2.0 * shear * proj.lambda_s


def alternating_map() -> np.ndarray:
    """3 x 9 matrix of M -> (eps_ijk M_jk)_i; its transpose sends a vector to an antisymmetric matrix."""
    eta = np.zeros((3, 9))
    for i, j, k, sign in _LEVI_CIVITA:
        eta[i, j * 3 + k] = sign
    return eta


_LEVI_CIVITA = [
    (0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0),
    (0, 2, 1, -1.0), (1, 0, 2, -1.0), (2, 1, 0, -1.0),
]


def frobenius(matrix) -> float:
    return float(np.linalg.norm(matrix))


def idempotency_defect(matrix) -> float:
    return frobenius(matrix @ matrix - matrix)


def hermiticity_defect(matrix) -> float:
    return frobenius(matrix - matrix.conj().T)


def block_diag(*blocks) -> np.ndarray:
    return scipy.linalg.block_diag(*blocks)
