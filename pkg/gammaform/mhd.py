# mhd.py
"""Moduli of the perturbed magnetohydrodynamic system about a frozen background."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MaterialError
from .layouts import layout_of
from .materials import MaterialLaw, real_array, real_scalar
from .models import PhysicsId
from .tensor_core import isotropic_projectors

DEFAULT_PENALTY = 1e6


def _vector(name, value):
    value = real_array(f"background {name}", value).reshape(-1)
    if value.shape != (3,):
        raise MaterialError(f"background {name} must be a 3-vector")
    return value


def _matrix(name, value):
    value = real_array(f"background {name}", value)
    if value.shape != (3, 3):
        raise MaterialError(f"background {name} must be 3 x 3")
    return value


@dataclass(frozen=True, eq=False)
class MhdBackground:
    """
    Background state (b, v, rho and their gradients) plus the constants
    mu0, sigma0 and the penalty parameters lambda_b, lambda_v.

    Gradients carry the derivative index first: grad_v[i, j] = dv_j/dx_i.
    div_v and advective default to the values implied by grad_v.
    """

    b: object
    v: object
    rho: float
    grad_b: object
    grad_v: object
    dv_dt: object
    mu0: float
    sigma0: float
    div_v: float = None
    advective: object = None
    lambda_b: float = DEFAULT_PENALTY
    lambda_v: float = DEFAULT_PENALTY

    def __post_init__(self):
        for name in ("b", "v", "dv_dt"):
            object.__setattr__(self, name, _vector(name, getattr(self, name)))
        for name in ("grad_b", "grad_v"):
            object.__setattr__(self, name, _matrix(name, getattr(self, name)))
        if self.div_v is None:
            object.__setattr__(self, "div_v", float(np.trace(self.grad_v)))
        if self.advective is None:
            # (v . grad) v
            object.__setattr__(self, "advective", self.grad_v.T @ self.v)
        else:
            object.__setattr__(self, "advective", _vector("advective", self.advective))
        for name in ("rho", "mu0", "sigma0", "div_v", "lambda_b", "lambda_v"):
            value = real_scalar(f"background {name}", getattr(self, name))
            object.__setattr__(self, name, value)
        for name in ("mu0", "lambda_b", "lambda_v"):
            if getattr(self, name) <= 0.0:
                raise MaterialError(f"{name} must be positive")

    @classmethod
    def quiescent(cls, rho=1.0, mu0=1.0, sigma0=1.0, **penalties) -> "MhdBackground":
        zero = np.zeros(3)
        return cls(zero, zero, rho, np.zeros((3, 3)), np.zeros((3, 3)), zero, mu0, sigma0, **penalties)


def _vector_matrix_map(vector) -> np.ndarray:
    """3 x 9 matrix of M -> vector^T M (contracting the first index of M)."""
    return np.kron(vector[None, :], np.eye(3))


def _trace_map(vector) -> np.ndarray:
    """3 x 9 matrix of M -> vector tr(M)."""
    return np.outer(vector, np.eye(3).reshape(-1))


def eta_of_gradb(grad_b, mu0: float) -> np.ndarray:
    """The antisymmetric stress mu0 [(grad b')^T - grad b'] carried by the current."""
    grad_b = np.asarray(grad_b)
    return mu0 * (grad_b.T - grad_b)


def build_mhd_L(background: MhdBackground) -> MaterialLaw:
    """
    33 x 33 moduli of the perturbed system.

    The continuity row is scalar; it occupies the first component of the
    three-component v' block, the other two rows stay zero.
    """
    bg = background
    layout = layout_of(PhysicsId.MHD_PERTURBED)
    proj = isotropic_projectors(3)
    sm = bg.sigma0 * bg.mu0
    matrix = np.zeros((33, 33))

    def put(row, col, value):
        matrix[layout.block_slice(row), layout.block_slice(col)] = value

    put("grad_b", "grad_b", bg.lambda_b * proj.lambda_h + 2.0 * bg.mu0 * proj.lambda_a)

    b_minus_trace = _vector_matrix_map(bg.b) - _trace_map(bg.b)
    put("b", "grad_b", b_minus_trace / bg.mu0 - sm * _vector_matrix_map(bg.v))
    put("b", "db_dt", -sm * np.eye(3))
    rotation = (bg.grad_b.T - bg.grad_b) / bg.mu0 - sm * (bg.div_v * np.eye(3) - bg.grad_v.T)
    put("b", "b", rotation)
    acceleration = bg.dv_dt + bg.advective
    r_map = bg.rho * _vector_matrix_map(bg.v) + bg.lambda_v * _trace_map(acceleration) + sm * b_minus_trace
    put("b", "grad_v", -r_map)
    put("b", "dv_dt", -bg.rho * np.eye(3) + sm * bg.grad_b.T)
    put("b", "v", -bg.rho * bg.grad_v.T)

    put("grad_v", "grad_v", bg.lambda_v * proj.lambda_h)
    put("dv_dt", "v", bg.rho * np.eye(3))

    continuity = layout.block_slice("v").start
    matrix[continuity, layout.block_slice("grad_div_v")] = -bg.lambda_v * bg.v
    matrix[continuity, layout.block_slice("grad_v")] = -bg.lambda_v * bg.div_v * np.eye(3).reshape(-1)
    return MaterialLaw(PhysicsId.MHD_PERTURBED, matrix)
