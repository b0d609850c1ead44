# test_config.py

import json

import pytest

from gammaform.config import apply_overrides, config_hash, load_config
from gammaform.errors import ConfigError
from gammaform.models import PhysicsId


def write_config(path, document):
    path.write_text(json.dumps(document))
    return path


@pytest.fixture
def verify_doc(tmp_path):
    return write_config(tmp_path / "verify.json", {"command": "verify", "physics": "seepage", "sample_count": 4})


def test_overrides_parse_json_values():
    document = apply_overrides({"solver": {"method": "direct"}}, [
        "solver.tolerance=1e-8", "solver.method=fixed_point", "grid.cells=[4, 4]",
    ])
    assert document["solver"] == {"method": "fixed_point", "tolerance": 1e-8}
    assert document["grid"]["cells"] == [4, 4]


def test_overrides_do_not_touch_the_input():
    original = {"seed": 1}
    apply_overrides(original, ["seed=2"])
    assert original == {"seed": 1}


@pytest.mark.parametrize("override", ["seed", "=3", "seed.value=1"])
def test_malformed_overrides(override):
    with pytest.raises(ConfigError):
        apply_overrides({"seed": 1}, [override])


def test_load_and_derived_values(verify_doc):
    cfg = load_config(verify_doc, command="verify")
    assert cfg.physics == [PhysicsId.SEEPAGE]
    assert cfg.sample_count == 4
    assert cfg.seed == 0
    assert str(cfg.output_dir) == "out"


def test_unknown_keys_are_rejected(verify_doc):
    with pytest.raises(ConfigError, match="solver"):
        load_config(verify_doc, ["solver.stepsize=2"], command="verify")


def test_command_mismatch(verify_doc):
    with pytest.raises(ConfigError):
        load_config(verify_doc, command="solve")


def test_missing_and_broken_files(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(broken)
    listing = write_config(tmp_path / "list.json", [1, 2])
    with pytest.raises(ConfigError):
        load_config(listing)


def test_hash_ignores_key_order_and_out(verify_doc, tmp_path):
    first = load_config(verify_doc, command="verify")
    reordered = write_config(tmp_path / "reordered.json", {"sample_count": 4, "physics": "seepage", "command": "verify"})
    second = load_config(reordered, command="verify", out=str(tmp_path / "elsewhere"))
    assert first.config_hash == second.config_hash
    assert second.output_dir == tmp_path / "elsewhere"
    changed = load_config(verify_doc, ["seed=5"], command="verify")
    assert changed.config_hash != first.config_hash
    assert config_hash({"a": 1, "b": 2}) == config_hash({"b": 2, "a": 1})


def test_single_physics_required(tmp_path):
    path = write_config(tmp_path / "solve.json", {"command": "solve", "physics": ["seepage", "mindlin"]})
    with pytest.raises(ConfigError):
        load_config(path).single_physics


def test_mean_field_must_be_finite(tmp_path):
    path = write_config(tmp_path / "solve.json", {"command": "solve", "physics": "seepage"})
    with pytest.raises(ConfigError):
        load_config(path, ["mean_field=[1, NaN]"])
