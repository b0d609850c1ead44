# findings.py
"""
Ledger of quantified discrepancies between printed projector formulas and the
canonical projectors. Findings are reported, never raised.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from .models import PhysicsId
from .printed import (
    AS_PRINTED,
    SINGLE_PREFACTOR,
    mindlin_gram_defect,
    mindlin_middle_inverse_check,
    printed_projector,
)
from .sampling import make_generator, sample_points
from .symbols import potential_symbol
from .tensor_core import frobenius
from .verification import SymbolReport, transverse_idempotency_defect

logger = logging.getLogger(__name__)

GRAM_TOLERANCE = 1e-12

NOTES = {
    PhysicsId.MHD_PERTURBED: (
        "the continuity flux is scalar; it is stored in the first component "
        "of the three-component v block, the other two components carry no law"
    ),
    PhysicsId.COSSERAT: (
        "the printed flux list has an identically zero entry paired with grad u; "
        "the layout keeps the grad u block and leaves its row of L zero"
    ),
    PhysicsId.FLEXOMAGNETOELECTRIC: (
        "the constraint list writes d + div q; the total flux uses d - div q, "
        "matching the sign of the -grad V potential blocks"
    ),
}


@dataclass
class Finding:
    """One quantified deviation, judged against its tolerance."""

    name: str
    physics: str
    magnitude: float
    tolerance: float
    detail: str = ""

    @property
    def discrepant(self) -> bool:
        return not self.magnitude <= self.tolerance

    def to_dict(self) -> dict:
        data = asdict(self)
        data["discrepant"] = self.discrepant
        return data


@dataclass
class FindingsLog:
    findings: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, name, physics, magnitude, tolerance, detail="") -> Finding:
        finding = Finding(name, str(physics), float(magnitude), float(tolerance), detail)
        self.findings.append(finding)
        if finding.discrepant:
            logger.info("finding %s (%s): %.3e > %.1e", name, physics, finding.magnitude, finding.tolerance)
        return finding

    def note(self, physics, text):
        self.notes.append({"physics": str(physics), "note": text})

    @property
    def discrepant_count(self) -> int:
        return sum(finding.discrepant for finding in self.findings)

    def to_dict(self) -> dict:
        return {
            "findings": [finding.to_dict() for finding in self.findings],
            "notes": list(self.notes),
            "discrepant_count": self.discrepant_count,
        }


def record_printed_variants(log: FindingsLog, report: SymbolReport):
    """Deviation from canonical and idempotency of every printed reading."""
    tolerances = report.tolerances
    for variant, stats in report.printed.items():
        log.add(
            f"{variant}/printed_vs_canonical", report.physics,
            stats.max_printed_vs_canonical, tolerances.printed,
            "max Frobenius distance to the canonical projector",
        )
        log.add(
            f"{variant}/idempotency", report.physics,
            stats.max_idempotency_defect, tolerances.idempotency,
            "max ||G G - G|| of the printed form",
        )


def record_cosserat_resolution(log: FindingsLog, report: SymbolReport):
    """Exactly one prefactor reading of the Cosserat form is expected to be a projector."""
    tolerance = report.tolerances.idempotency
    passing = [
        name for name in (AS_PRINTED, SINGLE_PREFACTOR)
        if report.printed[name].max_idempotency_defect <= tolerance
    ]
    detail = f"idempotent readings: {', '.join(passing) or 'none'}"
    log.add("prefactor_resolution", report.physics, abs(len(passing) - 1), 0.0, detail)


def record_mindlin_inverse(log: FindingsLog, sample_count: int, seed: int):
    points = sample_points(PhysicsId.MINDLIN, sample_count, make_generator(seed))
    closed = max(mindlin_middle_inverse_check(pt) for pt in points)
    gram = max(mindlin_gram_defect(pt) for pt in points)
    log.add(
        "closed_form_inverse", PhysicsId.MINDLIN, closed, 1e-10,
        "max ||X M - I|| of the printed closed-form inverse X of the middle matrix M",
    )
    log.add("middle_matrix_gram", PhysicsId.MINDLIN, gram, GRAM_TOLERANCE, "max ||B^H B - M||")


def _printed_range_defect(physics, pt) -> float:
    symbol = potential_symbol(physics, pt)
    printed = printed_projector(physics, pt)
    return frobenius(printed @ symbol - symbol) / frobenius(symbol)


def record_range_mismatch(log: FindingsLog, physics, sample_count: int, seed: int, tolerance: float):
    points = sample_points(physics, sample_count, make_generator(seed))
    worst = max(_printed_range_defect(physics, pt) for pt in points)
    log.add("range_mismatch", physics, worst, tolerance, "max ||G P - P|| / ||P|| of the printed form G")


def record_mhd_transverse(log: FindingsLog, sample_count: int, seed: int, tolerance: float):
    points = sample_points(PhysicsId.MHD_PERTURBED, sample_count, make_generator(seed))
    worst = max(transverse_idempotency_defect(pt) for pt in points)
    log.add(
        "transverse_idempotency", PhysicsId.MHD_PERTURBED, worst, tolerance,
        "max idempotency defect on unit v-fields transverse to k",
    )


def collect_findings(reports: dict, sample_count: int, seed: int) -> FindingsLog:
    """Findings for every verified physics in reports (physics name -> SymbolReport)."""
    log = FindingsLog()
    for name, report in reports.items():
        physics = PhysicsId.parse(name)
        record_printed_variants(log, report)
        if physics == PhysicsId.MINDLIN:
            record_mindlin_inverse(log, sample_count, seed)
        elif physics == PhysicsId.COSSERAT:
            record_cosserat_resolution(log, report)
        elif physics == PhysicsId.MHD_PERTURBED:
            record_mhd_transverse(log, sample_count, seed, report.tolerances.idempotency)
            record_range_mismatch(log, physics, sample_count, seed, report.tolerances.range)
        elif physics == PhysicsId.KIRCHHOFF_LOVE:
            record_range_mismatch(log, physics, sample_count, seed, report.tolerances.range)
        if physics in NOTES:
            log.note(physics, NOTES[physics])
    if not all(np.isfinite(finding.magnitude) for finding in log.findings):
        logger.warning("non-finite finding magnitudes in the verify report")
    return log
