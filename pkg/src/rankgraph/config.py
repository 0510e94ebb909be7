"""JSON run configurations for the simulation CLI.

A config file mirrors :class:`~rankgraph.harness.ExperimentSpec` plus the
estimator settings, the master seed, and a worker count. Validation is strict:
unknown keys are rejected, and violations are reported with the JSON path of
the offending key.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

import jsonschema

from .errors import InputError
from .estimator import (
    DEFAULT_C0,
    EstimatorConfig,
    FixedRank,
    ProfileLikelihoodRank,
    ThresholdRank,
)
from .harness import ExperimentSpec

RUN_CONFIG_SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["setting", "n_list", "eps_list", "calibration"],
    "properties": {
        "schema_version": {"type": "integer", "enum": [1]},
        "setting": {"enum": ["M1", "M2"]},
        "n_list": {
            "type": "array",
            "items": {"type": "integer", "minimum": 2},
            "minItems": 1,
        },
        "eps_list": {
            "type": "array",
            "items": {"type": "number", "minimum": 0},
            "minItems": 1,
        },
        "calibration": {"enum": ["null_reference", "permutation", "bootstrap"]},
        "rho_rule": {"enum": ["dense", "gamma_log"]},
        "gamma": {"type": "number", "exclusiveMinimum": 0},
        "m": {"type": "integer", "minimum": 1},
        "trials": {"type": "integer", "minimum": 1},
        "n_reps": {"type": "integer", "minimum": 1},
        "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "estimator": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "k": {
                    "oneOf": [
                        {"type": "integer", "minimum": 1},
                        {"enum": ["auto-threshold", "auto-profile"]},
                    ]
                },
                "c0": {"type": "number", "exclusiveMinimum": 0},
                "max_rank": {"type": "integer", "minimum": 2},
                "clip": {"type": "boolean"},
                "eta": {
                    "oneOf": [
                        {"type": "null"},
                        {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                    ]
                },
            },
        },
        "seed": {"type": "integer", "minimum": 0},
        "threads": {"type": "integer", "minimum": 1},
    },
}


def rank_selection_from_option(
    k: int | str,
    c0: float = DEFAULT_C0,
    max_rank: int | None = None,
):
    """Map the user-facing --k option onto a rank-selection rule."""
    if isinstance(k, int):
        return FixedRank(k)
    if k == "auto-threshold":
        return ThresholdRank(c0=c0)
    if k == "auto-profile":
        return ProfileLikelihoodRank(max_rank=max_rank)
    try:
        return FixedRank(int(k))
    except (TypeError, ValueError):
        raise InputError(
            f"--k must be an integer, 'auto-threshold' or 'auto-profile', got {k!r}"
        )


def estimator_config_from_dict(data: dict[str, Any]) -> EstimatorConfig:
    rank = rank_selection_from_option(
        data.get("k", 3),
        c0=data.get("c0", DEFAULT_C0),
        max_rank=data.get("max_rank"),
    )
    return EstimatorConfig(rank=rank, clip=data.get("clip", True), eta=data.get("eta"))


def validate_run_config(data: dict[str, Any]) -> None:
    """Raise jsonschema.ValidationError (with json_path) on any violation."""
    jsonschema.validate(data, RUN_CONFIG_SCHEMA)


@dataclass(frozen=True)
class LoadedConfig:
    spec: ExperimentSpec
    threads: int | None
    seed_given: bool


def load_run_config(path) -> LoadedConfig:
    """Parse and validate a config file."""
    with open(path, "r") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: not valid JSON: {exc}")
    validate_run_config(data)
    spec = ExperimentSpec(
        setting=data["setting"],
        n_list=tuple(data["n_list"]),
        eps_list=tuple(data["eps_list"]),
        calibration=data["calibration"],
        rho_rule=data.get("rho_rule", "dense"),
        gamma=data.get("gamma", 1.0),
        m=data.get("m", 1),
        trials=data.get("trials", 100),
        n_reps=data.get("n_reps", 200),
        alpha=data.get("alpha", 0.05),
        cfg=estimator_config_from_dict(data.get("estimator", {})),
        seed=data.get("seed", 0),
    )
    return LoadedConfig(spec=spec, threads=data.get("threads"), seed_given="seed" in data)
