# config.py
"""
Run configuration: one JSON document per run, dotted --set overrides,
schema validation and the run hash.
"""

from __future__ import annotations

import copy
import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path

import jsonschema
import numpy as np

from .errors import ConfigError
from .layouts import all_physics
from .models import PhysicsId
from .verification import Tolerances

logger = logging.getLogger(__name__)

COMMANDS = ("verify", "solve", "effective", "willis")

DEFAULT_SAMPLE_COUNT = 200
DEFAULT_SEED = 0
DEFAULT_OUTPUT = "out"

_PHYSICS_NAMES = [physics.value for physics in all_physics()]

_NUMBER_LIST = {"type": "array", "items": {"type": "number"}}
_COMPLEX = {
    "oneOf": [
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    ]
}
_POSITIVE = {"type": "number", "exclusiveMinimum": 0}
# numbers, nested numeric arrays, flags and sub-records; never bare strings
_PARAM_VALUE = {"type": ["number", "boolean", "array", "object"]}


def _closed(properties: dict, required=()) -> dict:
    schema = {"type": "object", "properties": properties, "additionalProperties": False}
    if required:
        schema["required"] = list(required)
    return schema


SCHEMA = _closed(
    {
        "command": {"enum": list(COMMANDS)},
        "physics": {
            "oneOf": [
                {"enum": _PHYSICS_NAMES + ["all"]},
                {"type": "array", "items": {"enum": _PHYSICS_NAMES}, "minItems": 1},
            ]
        },
        "sample_count": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "tolerances": _closed({name: _POSITIVE for name in ("idempotency", "hermiticity", "range", "printed")}),
        "grid": _closed(
            {
                "cells": {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1, "maxItems": 3},
                "cell_size": _POSITIVE,
                "omega": {"type": "number"},
            },
            required=("cells",),
        ),
        "materials": _closed(
            {
                "phases": {
                    "type": "array",
                    "minItems": 1,
                    "items": _closed(
                        {
                            "kind": {
                                "enum": [
                                    "scalar_blocks", "matrix", "plate", "mindlin", "cosserat",
                                    "seepage", "mhd", "grad2", "flexo",
                                ]
                            },
                            "blocks": {"type": "object", "additionalProperties": {"type": ["number", "array"]}},
                            "matrix": {"type": "array", "items": _NUMBER_LIST},
                            # keyword arguments of the parameter record; unknown names fail on construction
                            "params": {"type": "object", "additionalProperties": _PARAM_VALUE},
                        },
                        required=("kind",),
                    ),
                },
                "layout": _closed(
                    {
                        "kind": {"enum": ["homogeneous", "checkerboard", "laminate"]},
                        "axis": {"type": "integer", "minimum": 0, "maximum": 2},
                    },
                    required=("kind",),
                ),
            },
            required=("phases",),
        ),
        "source": _closed(
            {
                "kind": {"enum": ["zero", "constant", "per_phase", "file"]},
                "values": _NUMBER_LIST,
                "per_phase": {"type": "array", "items": _NUMBER_LIST},
                "path": {"type": "string"},
            },
            required=("kind",),
        ),
        "mean_field": _NUMBER_LIST,
        "solver": _closed(
            {
                "method": {"enum": ["fixed_point", "direct"]},
                "tolerance": _POSITIVE,
                "max_iterations": {"type": "integer", "minimum": 1},
                "reference_constant": _POSITIVE,
                "mean_policy": {"enum": ["fluctuation", "retain"]},
                "dense_cap": {"type": "integer", "minimum": 1},
            }
        ),
        "willis": _closed(
            {
                "k": _NUMBER_LIST,
                "omega": _NUMBER_LIST,
                "moduli": _closed(
                    {
                        "kind": {"enum": ["random", "explicit", "zero_coupling"]},
                        "C": _COMPLEX,
                        "S": _COMPLEX,
                        "rho": _COMPLEX,
                    },
                    required=("kind",),
                ),
                "forcing": _COMPLEX,
                "eigenstrain": _COMPLEX,
                "convention": {"enum": ["reduced", "transcribed"]},
            },
            required=("k", "omega"),
        ),
        "output": _closed({"directory": {"type": "string"}}),
    }
)


def load_document(path) -> dict:
    path = Path(path)
    try:
        with path.open() as handle:
            document = json.load(handle)
    except OSError as error:
        raise ConfigError(f"cannot read config {path}: {error.strerror or error}") from error
    except json.JSONDecodeError as error:
        raise ConfigError(f"{path} is not valid JSON: {error.msg} (line {error.lineno})") from error
    if not isinstance(document, dict):
        raise ConfigError(f"{path} must hold a JSON object")
    return document


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(document: dict, overrides) -> dict:
    """Copy of document with each "a.b.c=value" applied; values are parsed as JSON when possible."""
    document = copy.deepcopy(document)
    for override in overrides or ():
        key, sep, text = override.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"override must look like key=value, got '{override}'")
        parts = key.strip().split(".")
        target = document
        for part in parts[:-1]:
            child = target.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError(f"override '{key}' descends into non-object '{part}'")
            target = child
        target[parts[-1]] = _parse_value(text)
        logger.debug("override %s = %r", key, target[parts[-1]])
    return document


def validate(document: dict):
    validator = jsonschema.Draft7Validator(SCHEMA)
    errors = sorted(validator.iter_errors(document), key=lambda error: [str(part) for part in error.path])
    if errors:
        error = errors[0]
        location = ".".join(str(part) for part in error.path) or "<root>"
        raise ConfigError(f"invalid config at {location}: {error.message}")


def config_hash(document: dict) -> str:
    canonical = json.dumps(document, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def as_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        return complex(value[0], value[1])
    return complex(value)


@dataclass(frozen=True)
class RunConfig:
    """A validated run document and the values derived from it."""

    document: dict
    config_hash: str
    out: str = None

    @property
    def command(self) -> str:
        return self.document["command"]

    @property
    def physics(self) -> list:
        value = self.document.get("physics", "all")
        if value == "all":
            return all_physics()
        if isinstance(value, str):
            return [PhysicsId.parse(value)]
        return [PhysicsId.parse(name) for name in value]

    @property
    def single_physics(self) -> PhysicsId:
        physics = self.physics
        if len(physics) != 1:
            raise ConfigError(f"'{self.command}' needs exactly one physics, got {len(physics)}")
        return physics[0]

    @property
    def sample_count(self) -> int:
        return self.document.get("sample_count", DEFAULT_SAMPLE_COUNT)

    @property
    def seed(self) -> int:
        return self.document.get("seed", DEFAULT_SEED)

    @property
    def tolerances(self) -> Tolerances:
        return Tolerances(**self.document.get("tolerances", {}))

    def section(self, name: str) -> dict:
        return self.document.get(name, {})

    def require(self, name: str) -> dict:
        if name not in self.document:
            raise ConfigError(f"'{self.command}' needs a '{name}' section")
        return self.document[name]

    @property
    def output_dir(self) -> Path:
        if self.out is not None:
            return Path(self.out)
        return Path(self.section("output").get("directory", DEFAULT_OUTPUT))


def load_config(path, overrides=(), command: str = None, out: str = None) -> RunConfig:
    """
    Load, override and validate a run document.

    command and out come from the command line; a document naming another
    command is rejected. out is kept outside the hashed document.
    """
    document = apply_overrides(load_document(path), overrides)
    if command is not None:
        stated = document.setdefault("command", command)
        if stated != command:
            raise ConfigError(f"config is for '{stated}', command line asked for '{command}'")
    validate(document)
    if "command" not in document:
        raise ConfigError("config names no command")
    if "mean_field" in document and not np.all(np.isfinite(document["mean_field"])):
        raise ConfigError("mean_field must be finite")
    return RunConfig(document, config_hash(document), out)
