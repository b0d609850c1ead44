# willis.py
"""
One-dimensional Willis model sampled on a (k, omega) lattice.

Eliminating strain, stress and momentum leaves two nonlocal kernels,
G_f (force to displacement) and G_sigma (displacement to stress).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import LayoutError, MaterialError, RecoveryError, ResonanceError

logger = logging.getLogger(__name__)

RESONANCE_TOLERANCE = 1e-12
EQUIVALENCE_TOLERANCE = 1e-10
CONVENTIONS = ("reduced", "transcribed")


def _samples(name, value, shape) -> np.ndarray:
    value = np.broadcast_to(np.asarray(value, dtype=complex), shape).copy()
    if not np.all(np.isfinite(value)):
        raise MaterialError(f"Willis {name} samples must be finite")
    return value


@dataclass(frozen=True, eq=False)
class WillisModuli:
    """
    Symbols C, S and rho sampled at lattice points (k[i], omega[i]).

    Scalars broadcast over the lattice. Use lattice() to build the points
    of a product grid.
    """

    k: np.ndarray
    omega: np.ndarray
    C: np.ndarray
    S: np.ndarray
    rho: np.ndarray

    def __post_init__(self):
        k = np.atleast_1d(np.asarray(self.k, dtype=float))
        omega = np.atleast_1d(np.asarray(self.omega, dtype=float))
        if k.shape != omega.shape or k.ndim != 1:
            raise LayoutError(f"k and omega must be matching 1-d samples, got {k.shape} and {omega.shape}")
        if not (np.all(np.isfinite(k)) and np.all(np.isfinite(omega))):
            raise LayoutError("lattice points must be finite")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "omega", omega)
        for name in ("C", "S", "rho"):
            object.__setattr__(self, name, _samples(name, getattr(self, name), k.shape))

    @property
    def size(self) -> int:
        return self.k.size

    def same_lattice(self, other) -> bool:
        return self.k.shape == other.k.shape and np.array_equal(self.k, other.k) and np.array_equal(self.omega, other.omega)


@dataclass(frozen=True, eq=False)
class ReducedKernels:
    k: np.ndarray
    omega: np.ndarray
    Gf: np.ndarray
    Gsigma: np.ndarray


def lattice(ks, omegas) -> tuple:
    """Flattened product lattice: every k paired with every omega (k slowest)."""
    kk, ww = np.meshgrid(np.asarray(ks, dtype=float), np.asarray(omegas, dtype=float), indexing="ij")
    return kk.reshape(-1), ww.reshape(-1)


def random_moduli(rng, k, omega) -> WillisModuli:
    """Independent complex standard-normal C, S and rho at every lattice point."""
    k = np.atleast_1d(k)
    draw = lambda: rng.standard_normal(k.shape) + 1j * rng.standard_normal(k.shape)
    return WillisModuli(k, omega, draw(), draw(), draw())


def reduce_Gf(m: WillisModuli) -> np.ndarray:
    """G_f = k^2 C - omega k (S + conj S) - omega^2 rho."""
    return m.k ** 2 * m.C - m.omega * m.k * (m.S + np.conj(m.S)) - m.omega ** 2 * m.rho


def transcribed_Gf(m: WillisModuli) -> np.ndarray:
    """Kernel of the relations with the momentum coupling p = conj(S) eps - i omega rho u."""
    return m.k ** 2 * m.C - m.omega * m.k * (m.S - np.conj(m.S)) - m.omega ** 2 * m.rho


def reduce_Gsigma(m: WillisModuli) -> np.ndarray:
    """G_sigma = i k C - i omega S."""
    return 1j * m.k * m.C - 1j * m.omega * m.S


def reduce(m: WillisModuli) -> ReducedKernels:
    return ReducedKernels(m.k, m.omega, reduce_Gf(m), reduce_Gsigma(m))


def resonance_mask(m: WillisModuli, gf: np.ndarray = None) -> np.ndarray:
    """True where |G_f| <= 1e-12 (|k^2 C| + |omega^2 rho| + 1)."""
    gf = reduce_Gf(m) if gf is None else gf
    scale = np.abs(m.k ** 2 * m.C) + np.abs(m.omega ** 2 * m.rho) + 1.0
    return np.abs(gf) <= RESONANCE_TOLERANCE * scale


def _raise_on_resonance(m: WillisModuli, gf: np.ndarray):
    hits = np.flatnonzero(resonance_mask(m, gf))
    if hits.size:
        first = hits[0]
        raise ResonanceError(m.k[first], m.omega[first])


def full_solve(m: WillisModuli, f_hat, convention: str = "reduced") -> tuple:
    """
    Solve the four transformed relations at every lattice point:

        eps - i k u = 0
        sigma - C eps + i omega S u = 0
        p - S' eps + i omega rho u = 0
        i k sigma + i omega p = -f

    with S' = -conj(S) ("reduced", consistent with G_f) or conj(S)
    ("transcribed"). Returns (u, sigma, p, eps).
    """
    if convention not in CONVENTIONS:
        raise MaterialError(f"convention must be one of {CONVENTIONS}, got '{convention}'")
    f_hat = _samples("force", f_hat, m.k.shape)
    gf = reduce_Gf(m) if convention == "reduced" else transcribed_Gf(m)
    _raise_on_resonance(m, gf)

    coupling = -np.conj(m.S) if convention == "reduced" else np.conj(m.S)
    ik, iw = 1j * m.k, 1j * m.omega
    one, zero = np.ones_like(m.C), np.zeros_like(m.C)
    # unknowns ordered (u, eps, sigma, p)
    system = np.stack(
        [
            np.stack([-ik, one, zero, zero], axis=-1),
            np.stack([iw * m.S, -m.C, one, zero], axis=-1),
            np.stack([iw * m.rho, -coupling, zero, one], axis=-1),
            np.stack([zero, zero, ik, iw], axis=-1),
        ],
        axis=-2,
    )
    rhs = np.stack([zero, zero, zero, -f_hat], axis=-1)
    u, eps, sigma, p = np.moveaxis(np.linalg.solve(system, rhs[..., None])[..., 0], -1, 0)
    return u, sigma, p, eps


def eigenstrain_solve(m: WillisModuli, f_hat, u0_hat) -> np.ndarray:
    """u = u0 + f / G_f."""
    gf = reduce_Gf(m)
    _raise_on_resonance(m, gf)
    return _samples("eigenstrain", u0_hat, m.k.shape) + _samples("force", f_hat, m.k.shape) / gf


def recover_zero_coupling(r: ReducedKernels) -> WillisModuli:
    """Moduli with S = 0 reproducing (G_f, G_sigma): C = G_sigma/(ik), rho = (k^2 C - G_f)/omega^2."""
    k, omega = np.asarray(r.k, dtype=float), np.asarray(r.omega, dtype=float)
    bad = np.flatnonzero((k == 0.0) | (omega == 0.0))
    if bad.size:
        raise RecoveryError(
            f"zero-coupling recovery is undefined at k={k[bad[0]]:g}, omega={omega[bad[0]]:g}"
        )
    C = r.Gsigma / (1j * k)
    rho = (k ** 2 * C - r.Gf) / omega ** 2
    return WillisModuli(k, omega, C, np.zeros_like(C), rho)


def equivalence_check(m1: WillisModuli, m2: WillisModuli, rtol: float = EQUIVALENCE_TOLERANCE) -> tuple:
    """(equivalent, max relative deviation) of the two kernel sample sets."""
    if not m1.same_lattice(m2):
        raise LayoutError("moduli are sampled on different lattices")
    deviation = 0.0
    for first, second in ((reduce_Gf(m1), reduce_Gf(m2)), (reduce_Gsigma(m1), reduce_Gsigma(m2))):
        scale = np.maximum(np.maximum(np.abs(first), np.abs(second)), 1.0)
        deviation = max(deviation, float(np.max(np.abs(first - second) / scale, initial=0.0)))
    return deviation <= rtol, deviation


def write_kernels_csv(kernels: ReducedKernels, path) -> Path:
    table = np.column_stack(
        [kernels.k, kernels.omega, kernels.Gf.real, kernels.Gf.imag, kernels.Gsigma.real, kernels.Gsigma.imag]
    )
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, table, delimiter=",", header="k,omega,Gf_re,Gf_im,Gsigma_re,Gsigma_im", comments="", fmt="%.17g")
    logger.debug("wrote %s (%d lattice points)", path, kernels.k.size)
    return path
