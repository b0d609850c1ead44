# test_cli.py

import json
from pathlib import Path

import pytest

from main import main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def write_config(path, document):
    path.write_text(json.dumps(document))
    return str(path)


def read_report(directory):
    return json.loads((Path(directory) / "report.json").read_text())


def test_verify_single_physics(tmp_path):
    config = write_config(tmp_path / "verify.json", {"command": "verify", "physics": "seepage", "sample_count": 10})
    assert main(["verify", "--config", config, "--out", str(tmp_path / "out")]) == 0
    report = read_report(tmp_path / "out")
    assert report["exit_code"] == 0
    assert report["results"]["symbols"]["seepage"]["passed"]


def test_verify_is_deterministic(tmp_path):
    config = write_config(tmp_path / "verify.json", {"command": "verify", "physics": "kirchhoff-love", "sample_count": 8, "seed": 3})
    reports = []
    for name in ("first", "second"):
        main(["verify", "--config", config, "--out", str(tmp_path / name)])
        report = read_report(tmp_path / name)
        report.pop("wall_time")
        reports.append(report)
    assert reports[0] == reports[1]
    assert reports[0]["findings"]["discrepant_count"] > 0


def test_malformed_config_writes_nothing(tmp_path):
    config = tmp_path / "broken.json"
    config.write_text('{"command": "verify", "physics": ')
    assert main(["verify", "--config", str(config), "--out", str(tmp_path / "out")]) == 2
    assert not (tmp_path / "out").exists()


def test_schema_violation_is_a_usage_error(tmp_path):
    config = write_config(tmp_path / "verify.json", {"command": "verify", "physics": "unknown-physics"})
    assert main(["verify", "--config", config, "--out", str(tmp_path / "out")]) == 2


def test_unknown_command_exits_through_argparse(tmp_path):
    with pytest.raises(SystemExit):
        main(["plot", "--config", str(tmp_path / "x.json")])


def test_dense_cap_exceeded(tmp_path):
    code = main([
        "solve", "--config", str(CONFIGS / "checkerboard.json"),
        "--set", "solver.method=direct", "--set", "solver.dense_cap=10",
        "--out", str(tmp_path / "out"),
    ])
    assert code == 2
    assert not (tmp_path / "out" / "report.json").exists()


def test_homogeneous_plate_solve(tmp_path):
    out = tmp_path / "plate"
    assert main(["solve", "--config", str(CONFIGS / "homogeneous_plate.json"), "--out", str(out)]) == 0
    report = read_report(out)
    assert report["outputs"] == ["E.csv", "J.csv"]
    assert report["results"]["solve"]["rank"] == report["results"]["solve"]["unknowns"]
    assert (out / "E.csv").read_text().startswith("cell_index,")


def test_laminate_effective(tmp_path):
    out = tmp_path / "laminate"
    assert main(["effective", "--config", str(CONFIGS / "laminate.json"), "--out", str(out)]) == 0
    effective = read_report(out)["results"]["effective"]["effective"]
    assert effective[0][0] == pytest.approx(4.0 / 3.0, abs=1e-3)
    assert (out / "effective.csv").exists()


def test_willis_suite(tmp_path):
    out = tmp_path / "willis"
    assert main(["willis", "--config", str(CONFIGS / "willis.json"), "--out", str(out)]) == 0
    willis = read_report(out)["results"]["willis"]
    assert willis["lattice_size"] == 12
    assert willis["oracle_pass_count"] == willis["lattice_size"] - willis["resonant_points"]
    assert willis["recovered_equivalent"] is True
    assert willis["max_Gf_shift_change"] <= 1e-12
    kernels = (out / "kernels.csv").read_text().splitlines()
    assert len(kernels) == 13


def test_zero_coupling_willis_round_trip(tmp_path):
    config = write_config(tmp_path / "willis.json", {
        "command": "willis",
        "willis": {"k": [0.5, 2.0], "omega": [0.7], "moduli": {"kind": "zero_coupling", "C": 5.0, "rho": 1.0}},
    })
    assert main(["willis", "--config", config, "--out", str(tmp_path / "out")]) == 0
    willis = read_report(tmp_path / "out")["results"]["willis"]
    assert willis["recovery_round_trip_error"] <= 1e-12


def test_seepage_solve_has_vanishing_first_flux_block(tmp_path):
    out = tmp_path / "seepage"
    assert main(["solve", "--config", str(CONFIGS / "seepage.json"), "--out", str(out)]) == 0
    solve = read_report(out)["results"]["solve"]
    assert solve["converged"]
    assert solve["s_block_norm"] <= 1e-10


def seepage_document(params):
    document = json.loads((CONFIGS / "seepage.json").read_text())
    document["materials"]["phases"][1]["params"].update(params)
    return document


@pytest.mark.parametrize("params", [{"beta0": "fast"}, {"eta": None}])
def test_non_numeric_phase_parameter_fails_the_schema(tmp_path, params):
    config = write_config(tmp_path / "seepage.json", seepage_document(params))
    assert main(["solve", "--config", config, "--out", str(tmp_path / "out")]) == 2
    assert not (tmp_path / "out" / "report.json").exists()


@pytest.mark.parametrize("params", [{"k1": [1, 2]}, {"mu": {"value": 1}}, {"beta0": [[0.5]]}])
def test_ill_shaped_phase_parameter_is_a_usage_error(tmp_path, params):
    config = write_config(tmp_path / "seepage.json", seepage_document(params))
    assert main(["solve", "--config", config, "--out", str(tmp_path / "out")]) == 2
    assert not (tmp_path / "out" / "report.json").exists()
