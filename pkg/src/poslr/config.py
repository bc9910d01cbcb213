"""Strict flat YAML experiment configuration."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import yaml

from .core_types import ProblemConfig, validate_config
from .errors import ConfigError

ALGORITHMS = ("algorithm1", "algorithm2", "zero", "ridge")
_PROBLEM_FIELDS = {f.name: f for f in dataclasses.fields(ProblemConfig)}
_HARNESS_KEYS = {"algorithm", "checkpoints", "out_dir"}
_INT_FIELDS = {"d", "k", "k0", "T", "t0", "k1", "B", "seed"}
_FLOAT_FIELDS = {"sigma", "delta", "c_lambda", "vaw_reg", "kappa", "flip_fraction"}


@dataclass(frozen=True)
class ExperimentConfig:
    problem: ProblemConfig
    algorithm: str = "algorithm1"
    checkpoints: Union[str, tuple[int, ...]] = "dyadic"
    out_dir: Optional[str] = None

    def echo(self) -> dict:
        out = dataclasses.asdict(self.problem)
        out["algorithm"] = self.algorithm
        out["checkpoints"] = self.checkpoints if isinstance(self.checkpoints, str) else list(self.checkpoints)
        return out


def parse_checkpoints(value) -> Union[str, tuple[int, ...]]:
    if value is None or value == "dyadic":
        return "dyadic"
    if isinstance(value, str):
        value = [v for v in value.replace(",", " ").split() if v]
    try:
        pts = tuple(sorted(set(int(v) for v in value)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"checkpoints must be 'dyadic' or a list of rounds: {exc}") from None
    if not pts:
        raise ConfigError("checkpoint list is empty")
    return pts


def _coerce(key, value):
    if value is None:
        return None
    if key in _INT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{key} must be an integer, got {value!r}")
        return value
    if key in _FLOAT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key} must be a number, got {value!r}")
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{key} must be a string, got {value!r}")
    return value


def config_from_mapping(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a flat key: value mapping")
    unknown = sorted(set(data) - set(_PROBLEM_FIELDS) - _HARNESS_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(map(str, unknown))}")
    for key, value in data.items():
        if isinstance(value, dict) or (isinstance(value, list) and key != "checkpoints"):
            raise ConfigError(f"{key}: nested values are not allowed")
    missing = [k for k in ("d", "k", "k0", "T") if k not in data]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}")
    problem = ProblemConfig(**{k: _coerce(k, v) for k, v in data.items() if k in _PROBLEM_FIELDS})
    report = validate_config(problem)
    if not report.ok:
        raise ConfigError("invalid configuration: " + "; ".join(report.messages()))
    algorithm = data.get("algorithm", "algorithm1")
    if algorithm not in ALGORITHMS:
        raise ConfigError(f"algorithm must be one of {', '.join(ALGORITHMS)}, got {algorithm!r}")
    if algorithm == "algorithm1" and problem.mask_mode == "exact-size" and problem.k0 == 1 and problem.d > 1:
        raise ConfigError("algorithm1 with exact-size masks needs k0 >= 2")
    return ExperimentConfig(problem, algorithm, parse_checkpoints(data.get("checkpoints")),
                            data.get("out_dir"))


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from None
    return config_from_mapping(data or {})
