# runner.py
"""
Command orchestration: builds the objects a run document describes, runs the
command and collects everything into a RunReport.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import RunConfig, as_complex, load_config
from .errors import ConfigError, GammaformError
from .findings import FindingsLog, collect_findings
from .grid import Grid, GridField, checkerboard, field_header, homogeneous, laminate, read_field_csv, write_field_csv
from .layouts import layout_of
from .materials import (
    CosseratParams,
    FlexoCouplings,
    Grad2Blocks,
    MindlinParams,
    PlateParams,
    SeepageParams,
    build_material_law,
    law_field,
    matrix_law,
    scalar_block_law,
)
from .mhd import MhdBackground
from .models import PhysicsId
from .sampling import make_generator
from .solver import (
    SolveConfig,
    direct_solve,
    effective_operator,
    fixed_point_solve,
    flux_field,
    split_mhd_force,
)
from .tensor_core import hermiticity_defect
from .verification import verify_symbol
from .willis import (
    WillisModuli,
    equivalence_check,
    eigenstrain_solve,
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

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

ORACLE_TOLERANCE = 1e-10
ROUND_TRIP_TOLERANCE = 1e-12
SELFADJOINT_TOLERANCE = 1e-8
HOMOGENEOUS_TOLERANCE = 1e-10


@dataclass
class RunReport:
    """Everything one command produced; serialised as report.json."""

    command: str
    config_hash: str
    physics: list
    results: dict = field(default_factory=dict)
    findings: FindingsLog = field(default_factory=FindingsLog)
    outputs: list = field(default_factory=list)
    exit_code: int = EXIT_OK
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config_hash": self.config_hash,
            "physics": list(self.physics),
            "results": self.results,
            "findings": self.findings.to_dict(),
            "outputs": list(self.outputs),
            "exit_code": self.exit_code,
            "wall_time": self.wall_time,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def write(self, directory) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / "report.json"
        path.write_text(self.to_json() + "\n")
        return path


# ---- building the problem from a run document ----

def _flexo_params(diagonal=None, couplings=(), symmetrize=True) -> FlexoCouplings:
    pairs = {}
    for entry in couplings:
        try:
            pairs[(entry["row"], entry["col"])] = np.asarray(entry["value"], dtype=float)
        except (KeyError, TypeError, ValueError) as error:
            raise ConfigError("flexo couplings need 'row', 'col' and 'value'") from error
    return FlexoCouplings(dict(diagonal or {}), pairs, symmetrize)


def _mhd_params(**params) -> MhdBackground:
    if "b" in params:
        return MhdBackground(**params)
    return MhdBackground.quiescent(**params)


PARAM_RECORDS = {
    "plate": PlateParams,
    "mindlin": MindlinParams,
    "cosserat": CosseratParams,
    "seepage": SeepageParams,
    "mhd": _mhd_params,
    "grad2": Grad2Blocks,
    "flexo": _flexo_params,
}


def build_phase_law(physics: PhysicsId, phase: dict):
    kind = phase["kind"]
    if kind == "scalar_blocks":
        return scalar_block_law(physics, phase.get("blocks", {}))
    if kind == "matrix":
        if "matrix" not in phase:
            raise ConfigError("a 'matrix' phase needs a 'matrix' entry")
        return matrix_law(physics, phase["matrix"])
    try:
        record = PARAM_RECORDS[kind](**phase.get("params", {}))
    except TypeError as error:
        raise ConfigError(f"bad parameters for a '{kind}' phase: {error}") from error
    return build_material_law(physics, record)


def build_grid(cfg: RunConfig) -> Grid:
    spec = cfg.require("grid")
    return Grid(tuple(spec["cells"]), spec.get("cell_size", 1.0), spec.get("omega", 0.0))


def build_phase_map(cfg: RunConfig, grid: Grid) -> np.ndarray:
    layout = cfg.require("materials").get("layout", {"kind": "homogeneous"})
    kind = layout["kind"]
    if kind == "checkerboard":
        return checkerboard(grid.cells)
    if kind == "laminate":
        axis = layout.get("axis", 0)
        if axis >= grid.dim:
            raise ConfigError(f"laminate axis {axis} outside a {grid.dim}-d grid")
        return laminate(grid.cells, axis)
    return homogeneous(grid.cells)


def build_laws(cfg: RunConfig, physics: PhysicsId, grid: Grid, phases: np.ndarray):
    laws = [build_phase_law(physics, phase) for phase in cfg.require("materials")["phases"]]
    return law_field(grid, laws, phases)


def build_source(cfg: RunConfig, physics: PhysicsId, grid: Grid, phases: np.ndarray) -> GridField:
    spec = cfg.section("source") or {"kind": "zero"}
    layout = layout_of(physics)
    kind = spec["kind"]
    if kind == "zero":
        return GridField.zeros(grid, layout)
    if kind == "constant":
        return GridField.constant(grid, layout, np.asarray(spec.get("values", []), dtype=float))
    if kind == "per_phase":
        table = np.asarray(spec.get("per_phase", []), dtype=float)
        if table.ndim != 2 or table.shape[1] != layout.total_dim or table.shape[0] <= phases.max():
            raise ConfigError(f"per_phase source needs one {layout.total_dim}-vector per phase")
        return GridField(grid, layout, table[phases])
    if "path" not in spec:
        raise ConfigError("a 'file' source needs a 'path'")
    return read_field_csv(spec["path"], grid, layout)


def build_mean_field(cfg: RunConfig, physics: PhysicsId):
    if "mean_field" not in cfg.document:
        return None
    mean = np.asarray(cfg.document["mean_field"], dtype=float)
    n = layout_of(physics).total_dim
    if mean.shape != (n,):
        raise ConfigError(f"mean_field must have {n} entries for {physics}")
    return mean


def build_solver_config(cfg: RunConfig) -> SolveConfig:
    return SolveConfig(**cfg.section("solver"))


def _field_metadata(physics, grid: Grid, E: GridField) -> dict:
    return {
        "physics": physics.value,
        "cells": list(grid.cells),
        "cell_size": grid.cell_size,
        "omega": grid.omega,
        "columns": field_header(E),
    }


def _matrix_payload(matrix: np.ndarray):
    if np.iscomplexobj(matrix):
        return {"re": matrix.real.tolist(), "im": matrix.imag.tolist()}
    return matrix.tolist()


def write_matrix_csv(matrix: np.ndarray, path) -> Path:
    n = matrix.shape[1]
    if np.iscomplexobj(matrix):
        table = np.stack([matrix.real, matrix.imag], axis=-1).reshape(matrix.shape[0], -1)
        header = ",".join(f"col_{j}_{part}" for j in range(n) for part in ("re", "im"))
    else:
        table = matrix
        header = ",".join(f"col_{j}" for j in range(n))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, table, delimiter=",", header=header, comments="", fmt="%.17g")
    return path


# ---- commands ----

def cmd_verify(cfg: RunConfig, report: RunReport) -> int:
    reports = {}
    for physics in cfg.physics:
        reports[physics.value] = verify_symbol(physics, cfg.sample_count, cfg.seed, cfg.tolerances)
    report.findings = collect_findings(reports, cfg.sample_count, cfg.seed)
    report.results["symbols"] = {name: symbol.to_dict() for name, symbol in reports.items()}
    passed = all(symbol.passed for symbol in reports.values())
    report.results["passed"] = passed
    return EXIT_OK if passed else EXIT_FAILED


def cmd_solve(cfg: RunConfig, report: RunReport) -> int:
    physics = cfg.single_physics
    grid = build_grid(cfg)
    phases = build_phase_map(cfg, grid)
    laws = build_laws(cfg, physics, grid, phases)
    s = build_source(cfg, physics, grid, phases)
    mean = build_mean_field(cfg, physics)
    solver_cfg = build_solver_config(cfg)

    if solver_cfg.method == "direct":
        E, J, solve_report = direct_solve(laws, s, mean, solver_cfg)
    else:
        E, solve_report = fixed_point_solve(laws, s, solver_cfg, mean)
        J = flux_field(laws, E, s)

    out = cfg.output_dir
    write_field_csv(E, out / "E.csv")
    write_field_csv(J, out / "J.csv")
    report.outputs += ["E.csv", "J.csv"]
    report.results["solve"] = solve_report.to_dict()
    report.results["fields"] = _field_metadata(physics, grid, E)
    if physics == PhysicsId.MHD_PERTURBED:
        grad_p, neg_curl_j = split_mhd_force(J)
        report.results["mhd_force"] = {"grad_P_norm": grad_p.norm(), "neg_curl_j_norm": neg_curl_j.norm()}
    return EXIT_OK if solve_report.converged else EXIT_FAILED


def cmd_effective(cfg: RunConfig, report: RunReport) -> int:
    physics = cfg.single_physics
    grid = build_grid(cfg)
    phases = build_phase_map(cfg, grid)
    laws = build_laws(cfg, physics, grid, phases)
    dense_cap = build_solver_config(cfg).dense_cap
    effective = effective_operator(laws, physics, grid.omega, dense_cap)

    write_matrix_csv(effective, cfg.output_dir / "effective.csv")
    report.outputs.append("effective.csv")
    results = {
        "effective": _matrix_payload(effective),
        "selfadjoint_defect": hermiticity_defect(effective),
        "input_selfadjoint": laws.selfadjoint,
    }
    code = EXIT_OK
    if laws.selfadjoint and results["selfadjoint_defect"] > SELFADJOINT_TOLERANCE:
        code = EXIT_FAILED
    if np.all(phases == 0):
        deviation = float(np.linalg.norm(effective - laws.matrices[0]))
        results["homogeneous_deviation"] = deviation
        if deviation > HOMOGENEOUS_TOLERANCE * max(1.0, float(np.linalg.norm(laws.matrices[0]))):
            code = EXIT_FAILED
    report.results["effective"] = results
    return code


def build_moduli(cfg: RunConfig, spec: dict) -> WillisModuli:
    k, omega = lattice(spec["k"], spec["omega"])
    moduli = spec.get("moduli", {"kind": "random"})
    if moduli["kind"] == "random":
        return random_moduli(make_generator(cfg.seed), k, omega)
    C = as_complex(moduli.get("C", 1.0))
    rho = as_complex(moduli.get("rho", 1.0))
    S = 0.0 if moduli["kind"] == "zero_coupling" else as_complex(moduli.get("S", 0.0))
    return WillisModuli(k, omega, C, S, rho)


def _subset(m: WillisModuli, keep: np.ndarray) -> WillisModuli:
    return WillisModuli(m.k[keep], m.omega[keep], m.C[keep], m.S[keep], m.rho[keep])


def cmd_willis(cfg: RunConfig, report: RunReport) -> int:
    spec = cfg.require("willis")
    moduli = build_moduli(cfg, spec)
    forcing = as_complex(spec.get("forcing", 1.0))
    eigenstrain = as_complex(spec.get("eigenstrain", 0.0))
    convention = spec.get("convention", "reduced")
    log = report.findings

    kernels = reduce(moduli)
    write_kernels_csv(kernels, cfg.output_dir / "kernels.csv")
    report.outputs.append("kernels.csv")

    solved_kernel = kernels.Gf if convention == "reduced" else transcribed_Gf(moduli)
    resonant = resonance_mask(moduli, solved_kernel)
    for k, omega in zip(moduli.k[resonant], moduli.omega[resonant]):
        log.add("resonance", "willis-1d", 1.0, 0.0, f"G_f vanishes at k={k:g}, omega={omega:g}")
    if resonant.any():
        logger.warning("%d resonant lattice points skipped", int(resonant.sum()))
    live = _subset(moduli, ~resonant)
    results = {"lattice_size": moduli.size, "resonant_points": int(resonant.sum())}

    f_hat = np.full(live.size, forcing)
    u, sigma, p, eps = full_solve(live, f_hat, convention)
    reference = f_hat / solved_kernel[~resonant]
    agree = np.abs(u - reference) <= ORACLE_TOLERANCE * (1.0 + np.abs(u))
    results["oracle_pass_count"] = int(agree.sum())
    momentum = 1j * live.k * sigma + 1j * live.omega * p + f_hat
    results["max_momentum_residual"] = float(np.max(np.abs(momentum), initial=0.0))

    other = "transcribed" if convention == "reduced" else "reduced"
    try:
        u_other = full_solve(live, f_hat, other)[0]
        deviation = float(np.max(np.abs(u_other - u) / (1.0 + np.abs(u)), initial=0.0))
        log.add("momentum_coupling_convention", "willis-1d", deviation, ORACLE_TOLERANCE,
                f"max relative difference of u between the '{convention}' and '{other}' relations")
    except GammaformError as error:
        log.add("momentum_coupling_convention", "willis-1d", float("inf"), ORACLE_TOLERANCE, str(error))

    # eigenstrain relation uses the reduced kernel, whose zeros may differ under "transcribed"
    off = _subset(live, ~resonance_mask(live))
    u_eigen = eigenstrain_solve(off, forcing, np.full(off.size, eigenstrain))
    results["max_eigenstrain_superposition_error"] = float(
        np.max(np.abs(u_eigen - eigenstrain - forcing / reduce_Gf(off)), initial=0.0)
    )

    shifted = WillisModuli(live.k, live.omega, live.C, live.S + 1j, live.rho)
    results["max_Gf_shift_change"] = float(np.max(np.abs(reduce_Gf(shifted) - reduce_Gf(live)), initial=0.0))
    results["max_Gsigma_shift_change"] = float(
        np.max(np.abs(reduce_Gsigma(shifted) - reduce_Gsigma(live)), initial=0.0)
    )

    if np.all(live.k != 0.0) and np.all(live.omega != 0.0):
        recovered = recover_zero_coupling(reduce(live))
        equivalent, deviation = equivalence_check(live, recovered)
        results["recovered_equivalent"] = bool(equivalent)
        results["recovered_deviation"] = deviation
        if not np.any(live.S):
            round_trip = max(
                float(np.max(np.abs(recovered.C - live.C), initial=0.0)),
                float(np.max(np.abs(recovered.rho - live.rho), initial=0.0)),
            )
            results["recovery_round_trip_error"] = round_trip
    else:
        results["recovered_equivalent"] = None
        log.note("willis-1d", "zero-coupling recovery skipped: the lattice contains k = 0 or omega = 0")

    report.results["willis"] = results
    failed = results["oracle_pass_count"] < live.size
    if results.get("recovered_equivalent") is False:
        failed = True
    if results.get("recovery_round_trip_error", 0.0) > ROUND_TRIP_TOLERANCE:
        failed = True
    return EXIT_FAILED if failed else EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "solve": cmd_solve,
    "effective": cmd_effective,
    "willis": cmd_willis,
}


def execute(cfg: RunConfig) -> RunReport:
    """Run the configured command and write report.json into the output directory."""
    physics = [p.value for p in cfg.physics] if cfg.command != "willis" else []
    report = RunReport(command=cfg.command, config_hash=cfg.config_hash, physics=physics)
    started = time.perf_counter()
    logger.info("running %s (config %s)", cfg.command, cfg.config_hash[:12])
    report.exit_code = COMMANDS[cfg.command](cfg, report)
    report.wall_time = time.perf_counter() - started
    report.write(cfg.output_dir)
    logger.info("%s finished with exit code %d in %.2f s", cfg.command, report.exit_code, report.wall_time)
    return report


def run(command: str, config_path, overrides=(), out=None) -> tuple:
    """
    Load the config and run one command.

    Returns (exit code, report or None). Configuration problems and any
    error raised before a report exists give exit code 2.
    """
    try:
        cfg = load_config(config_path, overrides, command, out)
        report = execute(cfg)
    except GammaformError as error:
        logger.error("%s", error)
        return EXIT_USAGE, None
    return report.exit_code, report
