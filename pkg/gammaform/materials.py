# materials.py
"""Constructors for the moduli L(x) of every physics, one cell at a time."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import LayoutError, MaterialError
from .layouts import FLUX_PAIRS, layout_of
from .models import PhysicsId, SpectralPoint
from .symbols import check_point
from .tensor_core import alternating_map, block_diag, isotropic_tensor

logger = logging.getLogger(__name__)

SELFADJOINT_TOLERANCE = 1e-14


def _is_selfadjoint(matrix) -> bool:
    scale = max(1.0, float(np.max(np.abs(matrix)))) if matrix.size else 1.0
    return bool(np.max(np.abs(matrix - matrix.conj().T), initial=0.0) <= SELFADJOINT_TOLERANCE * scale)


@dataclass(frozen=True, eq=False)
class MaterialLaw:
    """The N x N moduli of one cell, laid out as layout_of(physics)."""

    physics: PhysicsId
    matrix: np.ndarray
    selfadjoint: bool = False

    def __post_init__(self):
        physics = PhysicsId.parse(self.physics)
        matrix = np.array(self.matrix)
        if not np.iscomplexobj(matrix):
            matrix = matrix.astype(float)
        n = layout_of(physics).total_dim
        if matrix.shape != (n, n):
            raise LayoutError(f"{physics} law must be {n} x {n}, got {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise MaterialError(f"{physics} law has non-finite entries")
        if self.selfadjoint and not _is_selfadjoint(matrix):
            raise MaterialError(f"{physics} law flagged self-adjoint but is not")
        matrix.setflags(write=False)
        object.__setattr__(self, "physics", physics)
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, e_vector) -> np.ndarray:
        return self.matrix @ np.asarray(e_vector)


def _law(physics, matrix) -> MaterialLaw:
    matrix = np.asarray(matrix)
    return MaterialLaw(physics, matrix, selfadjoint=_is_selfadjoint(matrix))


def real_scalar(name, value) -> float:
    """value as a finite float; MaterialError for strings, sequences and NaN."""
    try:
        value = float(value)
    except (TypeError, ValueError) as error:
        raise MaterialError(f"{name} must be a real number, got {value!r}") from error
    if not np.isfinite(value):
        raise MaterialError(f"{name} must be finite, got {value}")
    return value


def real_array(name, value) -> np.ndarray:
    try:
        value = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as error:
        raise MaterialError(f"{name} must be a real number or array, got {value!r}") from error
    if not np.all(np.isfinite(value)):
        raise MaterialError(f"{name} has non-finite entries")
    return value


def _positive(name, value):
    value = real_scalar(name, value)
    if not value > 0.0:
        raise MaterialError(f"{name} must be positive, got {value:g}")
    return value


def _square(name, value, d):
    """A d x d tensor from a scalar (times I) or a d x d array."""
    value = real_array(name, value)
    if value.ndim == 0:
        return float(value) * np.eye(d)
    if value.shape != (d, d):
        raise MaterialError(f"{name} must be a scalar or {d} x {d}, got shape {value.shape}")
    return value


def rigidity_matrix(rigidity, d: int = 2) -> np.ndarray:
    """A fourth-order rigidity tensor with minor symmetries as a d^2 x d^2 matrix."""
    rigidity = real_array("rigidity", rigidity)
    if rigidity.shape == (d * d, d * d):
        rigidity = rigidity.reshape(d, d, d, d)
    if rigidity.shape != (d, d, d, d):
        raise MaterialError(f"rigidity must have shape {(d,) * 4} or {(d * d, d * d)}, got {rigidity.shape}")
    scale = max(1.0, float(np.max(np.abs(rigidity))))
    if (np.max(np.abs(rigidity - rigidity.transpose(1, 0, 2, 3))) > 1e-12 * scale
            or np.max(np.abs(rigidity - rigidity.transpose(0, 1, 3, 2))) > 1e-12 * scale):
        raise MaterialError("rigidity tensor lacks minor symmetries D_ijkl = D_jikl = D_ijlk")
    return rigidity.reshape(d * d, d * d)


def isotropic_rigidity(d: int, bulk: float, shear: float) -> np.ndarray:
    return isotropic_tensor(d, bulk, shear).reshape(d, d, d, d)


@dataclass(frozen=True)
class PlateParams:
    """Kirchhoff-Love plate: rigidity D, thickness h, density rho."""

    rigidity: object
    thickness: float
    density: float


@dataclass(frozen=True)
class MindlinParams:
    rigidity: object
    shear_modulus: object
    thickness: float
    density: float
    shear_correction_factor: float = 5.0 / 6.0


@dataclass(frozen=True)
class CosseratParams:
    """Isotropic Cosserat moduli; couple_* enter the couple-stress tensor."""

    bulk: float
    shear: float
    couple_bulk: float
    couple_shear: float
    alpha: float
    density: float
    rotational_inertia: object = 1.0


@dataclass(frozen=True)
class SeepageParams:
    beta0: float
    k1: float
    mu: float
    eta: float


@dataclass(frozen=True)
class Grad2Blocks:
    """
    Blocks of a second-gradient dielectric or elastic law.

    first acts on the gradient, second on the second gradient; coupling maps
    the second gradient into the first flux and reverse_coupling the gradient
    into the second flux. Scalars mean multiples of the identity.
    """

    first: object
    second: object
    coupling: object = None
    reverse_coupling: object = None
    symmetrize: bool = True


@dataclass(frozen=True)
class FlexoCouplings:
    """
    Flexo moduli as named blocks: diagonal maps block -> scalar or square
    array, couplings maps (row block, column block) -> array.
    """

    diagonal: dict
    couplings: dict = field(default_factory=dict)
    symmetrize: bool = True


def symmetrize_energy_law(raw) -> np.ndarray:
    """(raw + raw^T) / 2: the unique symmetric L with the same quadratic form."""
    raw = np.asarray(raw)
    if raw.ndim != 2 or raw.shape[0] != raw.shape[1]:
        raise MaterialError(f"energy law must be square, got shape {raw.shape}")
    if np.iscomplexobj(raw):
        if np.any(raw.imag):
            raise MaterialError("energy law must be real")
        raw = raw.real
    return 0.5 * (raw + raw.T)


def _square_block(name, value, size):
    value = real_array(f"block '{name}'", value)
    if value.ndim == 0:
        return float(value) * np.eye(size)
    value = value.reshape(size, -1) if value.size == size * size else value
    if value.shape != (size, size):
        raise MaterialError(f"block '{name}' must be a scalar or {size} x {size}")
    return value


def _place(matrix, layout, row, col, value):
    rows, cols = layout.block_slice(row), layout.block_slice(col)
    shape = (rows.stop - rows.start, cols.stop - cols.start)
    value = real_array(f"block ({row}, {col})", value)
    if value.size != shape[0] * shape[1]:
        raise MaterialError(f"block ({row}, {col}) must hold {shape[0]} x {shape[1]} entries, got {value.shape}")
    matrix[rows, cols] += value.reshape(shape)


def _grad2_law(physics, params: Grad2Blocks) -> MaterialLaw:
    layout = layout_of(physics)
    first, second = layout.block_names
    n = layout.total_dim
    raw = np.zeros((n, n))
    _place(raw, layout, first, first, _square_block(first, params.first, layout.block(first).count))
    _place(raw, layout, second, second, _square_block(second, params.second, layout.block(second).count))
    if params.coupling is not None:
        _place(raw, layout, first, second, params.coupling)
    if params.reverse_coupling is not None:
        _place(raw, layout, second, first, params.reverse_coupling)
    elif params.coupling is not None and params.symmetrize:
        _place(raw, layout, second, first, real_array("coupling", params.coupling).reshape(
            layout.block(first).count, layout.block(second).count).T)
    if params.symmetrize:
        raw = symmetrize_energy_law(raw)
    return _law(physics, raw)


def _flexo_law(physics, params: FlexoCouplings) -> MaterialLaw:
    layout = layout_of(physics)
    n = layout.total_dim
    raw = np.zeros((n, n))
    for name, value in params.diagonal.items():
        _place(raw, layout, name, name, _square_block(name, value, layout.block(name).count))
    for (row, col), value in params.couplings.items():
        _place(raw, layout, row, col, value)
    if params.symmetrize:
        raw = symmetrize_energy_law(raw)
    return _law(physics, raw)


def _plate_law(params: PlateParams) -> MaterialLaw:
    h = _positive("thickness", params.thickness)
    rho = _positive("density", params.density)
    rigidity = rigidity_matrix(params.rigidity, 2)
    return _law(PhysicsId.KIRCHHOFF_LOVE, block_diag(-rigidity * h ** 3, [[h * rho]]))


def _mindlin_law(params: MindlinParams) -> MaterialLaw:
    h = _positive("thickness", params.thickness)
    rho = _positive("density", params.density)
    kappa = _positive("shear_correction_factor", params.shear_correction_factor)
    rigidity = rigidity_matrix(params.rigidity, 2)
    mu = _square("shear_modulus", params.shear_modulus, 2)
    return _law(PhysicsId.MINDLIN, block_diag(
        -rigidity * h ** 3,
        kappa * mu * h,
        rho * h ** 3 / 12.0 * np.eye(2),
        [[rho * h]],
    ))


def _cosserat_law(params: CosseratParams) -> MaterialLaw:
    rho = _positive("density", params.density)
    inertia = _square("rotational_inertia", params.rotational_inertia, 3)
    layout = layout_of(PhysicsId.COSSERAT)
    bulk, shear, couple_bulk, couple_shear, alpha = (
        real_scalar(name, getattr(params, name))
        for name in ("bulk", "shear", "couple_bulk", "couple_shear", "alpha")
    )
    stiffness = isotropic_tensor(3, bulk, shear)
    couple_stiffness = isotropic_tensor(3, couple_bulk, couple_shear)
    coupling = -2.0 * alpha * alternating_map()
    matrix = np.zeros((36, 36))
    # the grad_u row stays zero: its flux entry is identically 0
    _place(matrix, layout, "grad_v", "grad_v", -stiffness)
    _place(matrix, layout, "dv_dt", "dv_dt", rho * np.eye(3))
    _place(matrix, layout, "dv_dt", "grad_theta", coupling)
    _place(matrix, layout, "grad_theta", "grad_theta", couple_stiffness)
    _place(matrix, layout, "dtheta_dt", "dtheta_dt", -inertia)
    _place(matrix, layout, "theta", "grad_u", coupling)
    _place(matrix, layout, "theta", "theta", 4.0 * alpha * np.eye(3))
    return _law(PhysicsId.COSSERAT, matrix)


def _seepage_law(params: SeepageParams) -> MaterialLaw:
    beta0 = real_scalar("beta0", params.beta0)
    k1 = real_scalar("k1", params.k1)
    eta = real_scalar("eta", params.eta)
    mu = _positive("mu", params.mu)
    layout = layout_of(PhysicsId.SEEPAGE)
    matrix = np.zeros((8, 8))
    _place(matrix, layout, "grad_P", "dgrad_P_dt", eta * beta0 * np.eye(3))
    _place(matrix, layout, "grad_P", "grad_P", k1 / mu * np.eye(3))
    _place(matrix, layout, "dP_dt", "P", beta0)
    return _law(PhysicsId.SEEPAGE, matrix)


def scalar_block_law(physics, values: dict) -> MaterialLaw:
    """Block-diagonal law with value * I on each named block (missing blocks are 0)."""
    physics = PhysicsId.parse(physics)
    layout = layout_of(physics)
    matrix = np.zeros((layout.total_dim, layout.total_dim))
    for name, value in values.items():
        _place(matrix, layout, name, name, _square_block(name, value, layout.block(name).count))
    return _law(physics, matrix)


def matrix_law(physics, matrix) -> MaterialLaw:
    return _law(PhysicsId.parse(physics), real_array("matrix", matrix))


def build_material_law(physics, params) -> MaterialLaw:
    """Dispatch to the builder of one physics; params type must match it."""
    from .mhd import MhdBackground, build_mhd_L

    physics = PhysicsId.parse(physics)
    builders = {
        PhysicsId.KIRCHHOFF_LOVE: (PlateParams, _plate_law),
        PhysicsId.MINDLIN: (MindlinParams, _mindlin_law),
        PhysicsId.COSSERAT: (CosseratParams, _cosserat_law),
        PhysicsId.SEEPAGE: (SeepageParams, _seepage_law),
        PhysicsId.MHD_PERTURBED: (MhdBackground, build_mhd_L),
        PhysicsId.GRAD2_ELECTROSTATICS: (Grad2Blocks, lambda p: _grad2_law(physics, p)),
        PhysicsId.GRAD2_ELASTICITY: (Grad2Blocks, lambda p: _grad2_law(physics, p)),
        PhysicsId.FLEXOELECTRIC: (FlexoCouplings, lambda p: _flexo_law(physics, p)),
        PhysicsId.FLEXOMAGNETOELECTRIC: (FlexoCouplings, lambda p: _flexo_law(physics, p)),
    }
    expected, builder = builders[physics]
    if not isinstance(params, expected):
        raise MaterialError(f"{physics} needs {expected.__name__}, got {type(params).__name__}")
    law = builder(params)
    logger.debug("built %s law (self-adjoint: %s)", physics, law.selfadjoint)
    return law


def gauge_move_coupling(coupling, direction: str = "to_d") -> tuple:
    """
    Move a constant third-order coupling A between the (q, grad V) slot and
    the (d, grad grad V) slot of a second-gradient dielectric.

    The q-route puts -A on (q, grad V), i.e. q_ij = -A_ijk dV/dx_k; the d-route
    puts A on (d, grad grad V), i.e. d_j = A_ijk d2V/dx_i dx_k. For constant A
    both add the same amount to the total flux.

    Returns:
        (removed, added) deltas: "to_d" removes the q-route and adds the
        d-route, "to_q" the reverse.
    """
    a = np.asarray(coupling, dtype=float)
    if a.ndim != 3:
        raise MaterialError(
            f"coupling must be one constant 3 x 3 x 3 tensor, got shape {a.shape}; "
            "spatially varying couplings are not supported"
        )
    if a.shape != (3, 3, 3):
        raise MaterialError(f"coupling must have shape (3, 3, 3), got {a.shape}")
    physics = PhysicsId.GRAD2_ELECTROSTATICS
    layout = layout_of(physics)
    q_route = np.zeros((12, 12))
    _place(q_route, layout, "hess_V", "grad_V", -a.reshape(9, 3))
    d_route = np.zeros((12, 12))
    # row j, column (i, k) carries A_ijk
    _place(d_route, layout, "grad_V", "hess_V", a.transpose(1, 0, 2).reshape(3, 9))
    q_law = MaterialLaw(physics, q_route)
    d_law = MaterialLaw(physics, d_route)
    if direction == "to_d":
        return q_law, d_law
    if direction == "to_q":
        return d_law, q_law
    raise MaterialError(f"direction must be 'to_q' or 'to_d', got '{direction}'")


def total_flux(physics, j_hat, s_hat, pt: SpectralPoint) -> np.ndarray:
    """
    Modewise total flux first + s - ik . second for each multipole pair.

    For flexo physics the fluxes of all pairs are concatenated in layout order.
    """
    physics = PhysicsId.parse(physics)
    if physics not in FLUX_PAIRS:
        raise MaterialError(f"total flux is defined for second-gradient physics only, not {physics}")
    check_point(physics, pt)
    layout = layout_of(physics)
    j_hat = np.asarray(j_hat)
    s_hat = np.zeros(layout.total_dim) if s_hat is None else np.asarray(s_hat)
    for name, vector in (("flux", j_hat), ("source", s_hat)):
        if vector.shape != (layout.total_dim,):
            raise LayoutError(f"{name} must have length {layout.total_dim}, got {vector.shape}")
    ik = 1j * pt.wavevector
    parts = []
    for first, second in FLUX_PAIRS[physics]:
        second_block = j_hat[layout.block_slice(second)].reshape(layout.block(second).shape)
        divergence = np.tensordot(ik, second_block, axes=(0, 0)).reshape(-1)
        parts.append(j_hat[layout.block_slice(first)] + s_hat[layout.block_slice(first)] - divergence)
    return np.concatenate(parts)


@dataclass(frozen=True, eq=False)
class LawField:
    """Cellwise moduli on a grid; matrices has shape (cell_count, N, N) in C order."""

    physics: PhysicsId
    grid: object
    matrices: np.ndarray

    def __post_init__(self):
        physics = PhysicsId.parse(self.physics)
        n = layout_of(physics).total_dim
        matrices = np.asarray(self.matrices)
        if matrices.shape != (self.grid.cell_count, n, n):
            raise LayoutError(f"law field must have shape {(self.grid.cell_count, n, n)}, got {matrices.shape}")
        object.__setattr__(self, "physics", physics)
        object.__setattr__(self, "matrices", matrices)

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.matrices)

    @property
    def selfadjoint(self) -> bool:
        return all(_is_selfadjoint(m) for m in self.matrices)

    def apply_flat(self, values) -> np.ndarray:
        """L applied cellwise to (cell_count, N) or (cell_count, N, B) values."""
        if values.ndim == 2:
            return np.einsum("cij,cj->ci", self.matrices, values)
        return np.einsum("cij,cjb->cib", self.matrices, values)

    def hermitian_bounds(self) -> tuple:
        """Smallest and largest eigenvalue of the Hermitian parts over all cells."""
        hermitian = 0.5 * (self.matrices + np.conj(np.swapaxes(self.matrices, 1, 2)))
        eigenvalues = np.linalg.eigvalsh(hermitian)
        return float(eigenvalues.min()), float(eigenvalues.max())


def law_field(grid, laws, phase_map=None) -> LawField:
    """Assign laws[phase] to every cell of phase_map (homogeneous when omitted)."""
    laws = list(laws)
    if not laws:
        raise MaterialError("at least one material law is required")
    physics = laws[0].physics
    if any(law.physics != physics for law in laws):
        raise MaterialError("all phases of a law field must share one physics")
    phases = np.zeros(grid.cells, dtype=int) if phase_map is None else np.asarray(phase_map, dtype=int)
    if phases.shape != grid.cells:
        raise LayoutError(f"phase map must have shape {grid.cells}, got {phases.shape}")
    if phases.min() < 0 or phases.max() >= len(laws):
        raise MaterialError(f"phase map refers to phases outside 0..{len(laws) - 1}")
    stack = np.stack([law.matrix for law in laws])
    return LawField(physics, grid, stack[phases.reshape(-1)])
