# solver.py
"""
FFT realization of the canonical problem J = LE - s, Gamma1 E = E, Gamma1 J = 0
on periodic grids: projection, the reference-medium fixed point, a dense
direct oracle, effective operators and the MHD Helmholtz split.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg

from .errors import ConfigError, DenseCapError, LayoutError
from .grid import Grid, GridField
from .layouts import layout_of
from .materials import LawField
from .models import PhysicsId, SpectralPoint, make_layout
from .symbols import MEAN_POLICIES, mode_projector
from .tensor_core import orthonormal_range

logger = logging.getLogger(__name__)

METHODS = ("fixed_point", "direct")
DEFAULT_DENSE_CAP = 20000
BASIS_CHUNK = 256

FORCE_LAYOUT = make_layout(PhysicsId.MHD_PERTURBED, 3, [("force", (3,))], 3)


@dataclass(frozen=True)
class SolveConfig:
    """
    Args:
        method: "fixed_point" or "direct".
        tolerance: stopping threshold of the relative constraint residual.
        max_iterations: iteration cap of the fixed point.
        reference_constant: c of the reference medium; None picks the midpoint
            of the Hermitian spectrum of L over all cells.
        mean_policy: "fluctuation" or "retain".
        dense_cap: largest N x cells handed to the direct solver.
    """

    method: str = "fixed_point"
    tolerance: float = 1e-10
    max_iterations: int = 1000
    reference_constant: float = None
    mean_policy: str = "fluctuation"
    dense_cap: int = DEFAULT_DENSE_CAP

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"solver method must be one of {METHODS}, got '{self.method}'")
        if not self.tolerance > 0.0:
            raise ConfigError("solver tolerance must be positive")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be at least 1")
        if self.reference_constant is not None and not self.reference_constant > 0.0:
            raise ConfigError("reference constant must be positive")
        if self.mean_policy not in MEAN_POLICIES:
            raise ConfigError(f"mean policy must be one of {MEAN_POLICIES}, got '{self.mean_policy}'")
        if self.dense_cap < 1:
            raise ConfigError("dense cap must be positive")


@dataclass
class SolveReport:
    """Residuals and convergence record of one solve."""

    method: str
    mean_policy: str
    iterations: int = 0
    converged: bool = False
    residual_range: float = 0.0
    residual_constraint: float = 0.0
    residual_law: float = 0.0
    relative_residual: float = 0.0
    reference_constant: float = None
    indefinite: bool = False
    unknowns: int = None
    rank: int = None
    s_block_norm: float = None
    messages: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _check_field(field_: GridField, physics: PhysicsId, grid: Grid):
    if field_.layout != layout_of(physics):
        raise LayoutError(f"field layout is {field_.layout.physics}, solve is for {physics}")
    if field_.grid.cells != grid.cells:
        raise LayoutError(f"field lives on a {field_.grid.cells} grid, law on {grid.cells}")


def _forward(grid: Grid, values: np.ndarray) -> np.ndarray:
    """Orthonormal FFT of (cell_count, ...) values, returned in the same flat shape."""
    shaped = values.reshape(grid.cells + values.shape[1:])
    return np.fft.fftn(shaped, axes=grid.axes, norm="ortho").reshape(values.shape)


def _inverse(grid: Grid, values: np.ndarray) -> np.ndarray:
    shaped = values.reshape(grid.cells + values.shape[1:])
    return np.fft.ifftn(shaped, axes=grid.axes, norm="ortho").reshape(values.shape)


def _apply_modes(projectors: np.ndarray, spectrum: np.ndarray) -> np.ndarray:
    if spectrum.ndim == 2:
        return np.einsum("mij,mj->mi", projectors, spectrum)
    return np.einsum("mij,mjb->mib", projectors, spectrum)


@lru_cache(maxsize=16)
def _projector_stack(physics: PhysicsId, grid: Grid, mean_policy: str) -> np.ndarray:
    layout = layout_of(physics)
    ks = grid.wavevectors(layout.spatial_dim)
    stack = np.empty((grid.cell_count, layout.total_dim, layout.total_dim), dtype=complex)
    for m, k in enumerate(ks):
        stack[m] = mode_projector(physics, SpectralPoint(k, grid.omega), is_mean=(m == 0), mean_policy=mean_policy)
    stack.setflags(write=False)
    logger.debug("built %d mode projectors for %s on %s", grid.cell_count, physics, grid.cells)
    return stack


def spectral_projectors(physics, grid: Grid, mean_policy: str = "fluctuation") -> np.ndarray:
    """(cell_count, N, N) projectors of every grid mode, mode 0 being the mean."""
    if mean_policy not in MEAN_POLICIES:
        raise ConfigError(f"mean policy must be one of {MEAN_POLICIES}, got '{mean_policy}'")
    return _projector_stack(PhysicsId.parse(physics), grid, mean_policy)


def project_grid_field(f: GridField, physics, mean_policy: str = "fluctuation") -> GridField:
    """Gamma1 applied to a grid field; the result is in the space domain."""
    physics = PhysicsId.parse(physics)
    _check_field(f, physics, f.grid)
    projectors = spectral_projectors(physics, f.grid, mean_policy)
    spectrum = f.to_fourier().values.reshape(f.grid.cell_count, -1)
    projected = _inverse(f.grid, _apply_modes(projectors, spectrum))
    result = f.with_values(projected.reshape(f.values.shape), "space")
    if f.is_real and physics.is_static:
        return result.with_values(projected.real.reshape(f.values.shape).copy())
    return result


def reference_constant(laws: LawField) -> tuple:
    """(c, indefinite): midpoint of the Hermitian spectrum of L, clamped positive."""
    lowest, highest = laws.hermitian_bounds()
    indefinite = lowest <= 0.0
    c = 0.5 * (lowest + highest)
    if c <= 0.0:
        c = max(abs(lowest), abs(highest), 1e-12)
    return c, indefinite


def _mean_spectrum(grid: Grid, n: int, mean_e, mean_policy: str, report: SolveReport) -> np.ndarray:
    """Fourier coefficients of the prescribed uniform field (nonzero only at mode 0)."""
    spectrum = np.zeros((grid.cell_count, n), dtype=complex)
    if mean_e is None:
        return spectrum
    mean_e = np.asarray(mean_e)
    if mean_e.shape != (n,):
        raise LayoutError(f"mean field must be a {n}-vector, got {mean_e.shape}")
    if mean_policy == "fluctuation":
        spectrum[0] = mean_e * np.sqrt(grid.cell_count)
    elif np.any(mean_e):
        report.messages.append("mean_E is ignored under the 'retain' mean policy")
        logger.warning("mean_E is ignored under the 'retain' mean policy")
    return spectrum


def _finish(grid, layout, values, keep_real: bool) -> GridField:
    result = GridField(grid, layout, values.reshape(grid.cells + (layout.total_dim,)))
    return result.real_if_close() if keep_real else result


def _is_real_problem(laws: LawField, s: GridField, mean_e) -> bool:
    return laws.physics.is_static and laws.is_real and s.is_real and not np.iscomplexobj(mean_e)


def fixed_point_solve(laws: LawField, s: GridField, cfg: SolveConfig = None, mean_e=None) -> tuple:
    """
    Reference-medium iteration E <- mean_E - (1/c) Gamma1 ((L - cI) E - s).

    Every iterate lies in the range of Gamma1, so the update is carried out as
    E <- E - (1/c) Gamma1 J with J = LE - s. Non-convergence is reported.
    """
    cfg = cfg or SolveConfig()
    physics, grid = laws.physics, laws.grid
    layout = layout_of(physics)
    _check_field(s, physics, grid)
    report = SolveReport(method="fixed_point", mean_policy=cfg.mean_policy)
    if cfg.reference_constant is None:
        c, indefinite = reference_constant(laws)
    else:
        c, indefinite = cfg.reference_constant, reference_constant(laws)[1]
    report.reference_constant, report.indefinite = float(c), bool(indefinite)
    if indefinite:
        message = "L is not positive definite; the fixed point may diverge, use the direct method"
        report.messages.append(message)
        logger.warning(message)

    projectors = spectral_projectors(physics, grid, cfg.mean_policy)
    s_flat = s.to_space().flat()
    s_norm = float(np.linalg.norm(s_flat))
    e_hat = _mean_spectrum(grid, layout.total_dim, mean_e, cfg.mean_policy, report)
    for iteration in range(cfg.max_iterations + 1):
        e_flat = _inverse(grid, e_hat)
        le = laws.apply_flat(e_flat)
        gamma_j = _apply_modes(projectors, _forward(grid, le - s_flat))
        scale = s_norm + float(np.linalg.norm(le))
        report.relative_residual = float(np.linalg.norm(gamma_j)) / scale if scale > 0.0 else 0.0
        logger.debug("iteration %d: relative residual %.3e", iteration, report.relative_residual)
        if report.relative_residual <= cfg.tolerance:
            report.converged = True
            break
        if iteration == cfg.max_iterations:
            break
        e_hat = e_hat - gamma_j / c
        report.iterations = iteration + 1

    if not report.converged:
        message = f"fixed point did not converge in {cfg.max_iterations} iterations"
        report.messages.append(message)
        logger.warning("%s (relative residual %.3e)", message, report.relative_residual)
    E = _finish(grid, layout, _inverse(grid, e_hat), _is_real_problem(laws, s, mean_e))
    J = E.with_values((laws.apply_flat(E.flat()) - s_flat).reshape(E.values.shape))
    _fill_residuals(report, E, J, s, laws, cfg.mean_policy)
    logger.info(
        "fixed point: %d iterations, converged=%s, relative residual %.2e",
        report.iterations, report.converged, report.relative_residual,
    )
    return E, report


class _ProjectedOperator:
    """Gamma1 L restricted to the range of Gamma1, written in per-mode orthonormal bases."""

    def __init__(self, laws: LawField, mean_policy: str):
        self.laws = laws
        self.grid = laws.grid
        projectors = spectral_projectors(laws.physics, self.grid, mean_policy)
        bases = [orthonormal_range(p) for p in projectors]
        n = projectors.shape[1]
        width = max([b.shape[1] for b in bases] + [1])
        self.q = np.zeros((len(bases), n, width), dtype=complex)
        for m, basis in enumerate(bases):
            self.q[m, :, : basis.shape[1]] = basis
        self.modes = np.concatenate([np.full(b.shape[1], m) for m, b in enumerate(bases)]).astype(int)
        self.columns = np.concatenate([np.arange(b.shape[1]) for b in bases]).astype(int)

    @property
    def unknowns(self) -> int:
        return len(self.modes)

    def synthesize(self, coefficients: np.ndarray) -> np.ndarray:
        """(unknowns, B) coefficients to (cell_count, N, B) space values."""
        padded = np.zeros((self.q.shape[0], self.q.shape[2], coefficients.shape[1]), dtype=complex)
        padded[self.modes, self.columns] = coefficients
        return _inverse(self.grid, np.einsum("mnr,mrb->mnb", self.q, padded))

    def restrict(self, values: np.ndarray) -> np.ndarray:
        """Components of (cell_count, N, B) space values along the range bases."""
        spectrum = _forward(self.grid, values)
        return np.einsum("mnr,mnb->mrb", self.q.conj(), spectrum)[self.modes, self.columns]

    def matrix(self) -> np.ndarray:
        size = self.unknowns
        a = np.zeros((size, size), dtype=complex)
        for start in range(0, size, BASIS_CHUNK):
            stop = min(start + BASIS_CHUNK, size)
            unit = np.zeros((size, stop - start), dtype=complex)
            unit[np.arange(start, stop), np.arange(stop - start)] = 1.0
            a[:, start:stop] = self.restrict(self.laws.apply_flat(self.synthesize(unit)))
        return a

    def solve(self, rhs: np.ndarray, report: SolveReport) -> np.ndarray:
        report.unknowns, report.rank = self.unknowns, 0
        if self.unknowns == 0:
            return np.zeros((0, rhs.shape[1]), dtype=complex)
        solution, _, rank, _ = scipy.linalg.lstsq(self.matrix(), rhs)
        report.rank = int(rank)
        if rank < self.unknowns:
            message = f"projected operator is singular (rank {rank} of {self.unknowns}); least-squares solution returned"
            report.messages.append(message)
            logger.warning(message)
        return solution


def _check_cap(laws: LawField, cap: int):
    unknowns = layout_of(laws.physics).total_dim * laws.grid.cell_count
    if unknowns > cap:
        raise DenseCapError(unknowns, cap)


def direct_solve(laws: LawField, s: GridField, mean_e=None, cfg: SolveConfig = None) -> tuple:
    """
    Dense oracle: E = mean_E + Q c with Q the range bases of every mode, c from
    the least-squares solution of Q^dagger F (L E - s) = 0. Returns (E, J, report).
    """
    cfg = cfg or SolveConfig(method="direct")
    physics, grid = laws.physics, laws.grid
    layout = layout_of(physics)
    _check_field(s, physics, grid)
    _check_cap(laws, cfg.dense_cap)
    report = SolveReport(method="direct", mean_policy=cfg.mean_policy)

    operator = _ProjectedOperator(laws, cfg.mean_policy)
    s_flat = s.to_space().flat()
    e_mean = _inverse(grid, _mean_spectrum(grid, layout.total_dim, mean_e, cfg.mean_policy, report))
    rhs = -operator.restrict((laws.apply_flat(e_mean) - s_flat)[:, :, None])
    coefficients = operator.solve(rhs, report)
    e_flat = e_mean + operator.synthesize(coefficients)[:, :, 0]

    E = _finish(grid, layout, e_flat, _is_real_problem(laws, s, mean_e))
    J = E.with_values((laws.apply_flat(E.flat()) - s_flat).reshape(E.values.shape))
    _fill_residuals(report, E, J, s, laws, cfg.mean_policy)
    report.iterations = 1
    report.converged = report.rank == report.unknowns
    logger.info("direct solve: %d unknowns, rank %s", operator.unknowns, report.rank)
    return E, J, report


def effective_operator(laws: LawField, physics=None, omega: float = None, dense_cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """
    N x N effective operator: column j is the cell average of J for the
    mean-driven solve with mean_E = e_j and s = 0.
    """
    if physics is not None and PhysicsId.parse(physics) != laws.physics:
        raise LayoutError(f"law field is {laws.physics}, effective operator requested for {physics}")
    if omega is not None and float(omega) != laws.grid.omega:
        grid = Grid(laws.grid.cells, laws.grid.cell_size, omega)
        laws = LawField(laws.physics, grid, laws.matrices)
    _check_cap(laws, dense_cap)
    report = SolveReport(method="direct", mean_policy="fluctuation")
    operator = _ProjectedOperator(laws, "fluctuation")
    # uniform field e_j in column j, so L e_j is column j of L in every cell
    rhs = -operator.restrict(laws.matrices.astype(complex))
    fluctuations = operator.synthesize(operator.solve(rhs, report))
    effective = (laws.matrices + laws.apply_flat(fluctuations)).mean(axis=0)
    for message in report.messages:
        logger.warning("effective operator: %s", message)
    if laws.physics.is_static and laws.is_real:
        effective = np.real_if_close(effective, tol=1000)
    return effective


def _split_values(grid: Grid, values: np.ndarray) -> tuple:
    ks = grid.wavevectors(3)
    k_squared = np.einsum("mi,mi->m", ks, ks)
    spectrum = _forward(grid, values)
    safe = np.where(k_squared > 0.0, k_squared, 1.0)
    longitudinal = ks * (np.einsum("mi,mi->m", ks, spectrum) / safe)[:, None]
    # k = 0 modes belong to the curl-free part
    longitudinal[k_squared == 0.0] = spectrum[k_squared == 0.0]
    curl_free = _inverse(grid, longitudinal)
    div_free = _inverse(grid, spectrum - longitudinal)
    if not np.iscomplexobj(values):
        curl_free, div_free = curl_free.real, div_free.real
    return curl_free, div_free


def helmholtz_split(w: GridField) -> tuple:
    """(curl_free, div_free) parts of a field of 3-vectors."""
    if w.layout.total_dim != 3:
        raise LayoutError(f"Helmholtz split needs 3-vectors, got {w.layout.total_dim} components")
    w = w.to_space()
    curl_free, div_free = _split_values(w.grid, w.flat())
    return (
        w.with_values(curl_free.reshape(w.values.shape)),
        w.with_values(div_free.reshape(w.values.shape)),
    )


def split_mhd_force(J: GridField) -> tuple:
    """
    Split the force block of a perturbed-MHD flux into (grad P', -curl j').

    The block holds -div(sigma' + eta(j')); its longitudinal part is the
    pressure gradient, the transverse part the Lorentz term.
    """
    if J.layout != layout_of(PhysicsId.MHD_PERTURBED):
        raise LayoutError("split_mhd_force needs a perturbed-MHD flux field")
    J = J.to_space()
    force = GridField(J.grid, FORCE_LAYOUT, J.block("b").copy())
    return helmholtz_split(force)


def residuals(E: GridField, J: GridField, s: GridField, laws: LawField, physics=None, mean_policy: str = "fluctuation") -> SolveReport:
    """Residual norms of a candidate solution (E, J) of the canonical problem."""
    if physics is not None and PhysicsId.parse(physics) != laws.physics:
        raise LayoutError(f"law field is {laws.physics}, residuals requested for {physics}")
    for field_ in (E, J, s):
        _check_field(field_, laws.physics, laws.grid)
    report = SolveReport(method="check", mean_policy=mean_policy)
    _fill_residuals(report, E, J, s, laws, mean_policy)
    return report


def _fill_residuals(report: SolveReport, E: GridField, J: GridField, s: GridField, laws: LawField, mean_policy: str):
    grid = laws.grid
    projectors = spectral_projectors(laws.physics, grid, mean_policy)
    e_hat = E.to_fourier().values.reshape(grid.cell_count, -1)
    j_hat = J.to_fourier().values.reshape(grid.cell_count, -1)
    outside = e_hat - _apply_modes(projectors, e_hat)
    if mean_policy == "fluctuation":
        outside[0] = 0.0
    report.residual_range = float(np.linalg.norm(outside))
    report.residual_constraint = float(np.linalg.norm(_apply_modes(projectors, j_hat)))
    law = laws.apply_flat(E.to_space().flat()) - s.to_space().flat()
    report.residual_law = float(np.linalg.norm(J.to_space().flat() - law))
    if laws.physics == PhysicsId.SEEPAGE:
        report.s_block_norm = float(np.linalg.norm(J.to_space().block("dgrad_P_dt")))


def flux_field(laws: LawField, E: GridField, s: GridField) -> GridField:
    """J = LE - s, cell by cell."""
    _check_field(E, laws.physics, laws.grid)
    _check_field(s, laws.physics, laws.grid)
    values = laws.apply_flat(E.to_space().flat()) - s.to_space().flat()
    return E.to_space().with_values(values.reshape(E.values.shape))
