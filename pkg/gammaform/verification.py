# verification.py

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import asdict, dataclass, field

import numpy as np

from .layouts import layout_of
from .models import PhysicsId
from .printed import printed_projector, variants_of
from .sampling import make_generator, sample_points
from .symbols import canonical_projector, potential_symbol
from .tensor_core import frobenius, hermiticity_defect, idempotency_defect, orthonormal_range

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Tolerances:
    idempotency: float = 1e-10
    hermiticity: float = 1e-12
    range: float = 1e-10
    printed: float = 1e-10


@dataclass
class VariantStats:
    """Worst-case behaviour of one printed projector reading over the samples."""

    max_printed_vs_canonical: float = 0.0
    max_idempotency_defect: float = 0.0
    max_hermiticity_defect: float = 0.0

    def absorb(self, printed, canonical):
        self.max_printed_vs_canonical = max(self.max_printed_vs_canonical, frobenius(printed - canonical))
        self.max_idempotency_defect = max(self.max_idempotency_defect, idempotency_defect(printed))
        self.max_hermiticity_defect = max(self.max_hermiticity_defect, hermiticity_defect(printed))


@dataclass
class SymbolReport:
    """
    Verification of one physics' canonical projector over random spectral points.

    verdicts only cover the canonical checks; printed variants are reported
    through their VariantStats and judged by the caller as findings.
    """

    physics: str
    samples: int
    seed: int
    potential_dim: int
    max_idempotency_defect: float = 0.0
    max_hermiticity_defect: float = 0.0
    max_range_defect: float = 0.0
    rank_histogram: dict = field(default_factory=dict)
    printed: dict = field(default_factory=dict)
    tolerances: Tolerances = field(default_factory=Tolerances)

    @property
    def max_printed_vs_canonical(self) -> dict:
        return {name: stats.max_printed_vs_canonical for name, stats in self.printed.items()}

    @property
    def verdicts(self) -> dict:
        return {
            "idempotency": self.max_idempotency_defect <= self.tolerances.idempotency,
            "hermiticity": self.max_hermiticity_defect <= self.tolerances.hermiticity,
            "range": self.max_range_defect <= self.tolerances.range,
            "rank": set(self.rank_histogram) == {self.potential_dim},
        }

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        return {
            "physics": self.physics,
            "samples": self.samples,
            "seed": self.seed,
            "potential_dim": self.potential_dim,
            "max_idempotency_defect": self.max_idempotency_defect,
            "max_hermiticity_defect": self.max_hermiticity_defect,
            "max_range_defect": self.max_range_defect,
            "rank_histogram": {str(rank): count for rank, count in sorted(self.rank_histogram.items())},
            "printed": {name: asdict(stats) for name, stats in self.printed.items()},
            "tolerances": asdict(self.tolerances),
            "verdicts": self.verdicts,
            "passed": self.passed,
        }


def verify_symbol(physics, sample_count: int = 200, seed: int = 0, tolerances: Tolerances = None) -> SymbolReport:
    """
    Check the canonical projector of one physics at seeded random modes.

    Every sample also evaluates each printed variant against the canonical
    projector.
    """
    physics = PhysicsId.parse(physics)
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    tolerances = tolerances or Tolerances()
    layout = layout_of(physics)
    report = SymbolReport(
        physics=physics.value,
        samples=sample_count,
        seed=int(seed),
        potential_dim=layout.potential_dim,
        tolerances=tolerances,
        printed={name: VariantStats() for name in variants_of(physics)},
    )
    ranks = Counter()
    rng = make_generator(seed)
    for pt in sample_points(physics, sample_count, rng):
        symbol = potential_symbol(physics, pt)
        gamma = canonical_projector(physics, pt)
        report.max_idempotency_defect = max(report.max_idempotency_defect, idempotency_defect(gamma))
        report.max_hermiticity_defect = max(report.max_hermiticity_defect, hermiticity_defect(gamma))
        range_defect = frobenius(gamma @ symbol - symbol) / frobenius(symbol)
        report.max_range_defect = max(report.max_range_defect, range_defect)
        ranks[orthonormal_range(gamma).shape[1]] += 1
        for name, stats in report.printed.items():
            stats.absorb(printed_projector(physics, pt, name), gamma)
    report.rank_histogram = dict(ranks)
    logger.info(
        "%s: %d samples, idempotency %.2e, hermiticity %.2e, range %.2e",
        physics, sample_count, report.max_idempotency_defect,
        report.max_hermiticity_defect, report.max_range_defect,
    )
    return report


def range_mismatch(physics, pt, variant: str = None) -> float:
    """Frobenius distance between the printed projector and the canonical one at one mode."""
    return frobenius(printed_projector(physics, pt, variant) - canonical_projector(physics, pt))


def transverse_idempotency_defect(pt) -> float:
    """Idempotency defect of the printed MHD form restricted to a v-field transverse to k."""
    gamma = printed_projector(PhysicsId.MHD_PERTURBED, pt)
    k = pt.wavevector
    transverse = np.cross(k, [1.0, 0.0, 0.0] if abs(k[0]) < 0.9 * np.linalg.norm(k) else [0.0, 1.0, 0.0])
    transverse = transverse / np.linalg.norm(transverse)
    field_v = np.zeros(33, dtype=complex)
    field_v[30:33] = transverse
    return float(np.linalg.norm(gamma @ (gamma @ field_v) - gamma @ field_v))
