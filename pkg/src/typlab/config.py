"""Experiment configuration: a strict JSON schema mirroring the run
parameters.

Unknown keys are errors (they are usually typos in physics parameters),
missing keys are errors, and every value is type- and range-checked before
any work starts.  All failures raise :class:`ConfigParseError` naming the
offending field.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ConfigParseError, TyplabError
from .models import ModelSpec

_MODEL_KEYS = {"n", "delta_e", "v_kind", "v_scale", "seed"}
_MODEL_OPTIONAL_KEYS = {"v_diagonal"}
_TIME_KEYS = {"t_max", "points"}
_OUTPUT_KEYS = {"directory", "emit_trajectories", "emit_plot"}
_TOP_KEYS = {"model", "d", "M", "time", "base_seed", "output"}


@dataclass(frozen=True)
class TimeSettings:
    t_max: float
    points: int


@dataclass(frozen=True)
class OutputSettings:
    directory: str
    emit_trajectories: bool
    emit_plot: bool


@dataclass(frozen=True)
class ExperimentConfig:
    """One full experiment: model, deviation, ensemble size, grid, outputs."""

    model: ModelSpec
    d: float
    num_trajectories: int
    time: TimeSettings
    base_seed: int
    output: OutputSettings

    def with_overrides(
        self, out_dir: str | None = None, base_seed: int | None = None
    ) -> "ExperimentConfig":
        cfg = self
        if out_dir is not None:
            cfg = replace(cfg, output=replace(cfg.output, directory=out_dir))
        if base_seed is not None:
            cfg = replace(cfg, base_seed=base_seed)
        return cfg


def _require_keys(section: dict, path: str, required: set, optional: set = frozenset()):
    for key in section:
        if key not in required and key not in optional:
            raise ConfigParseError(f"unknown field '{path}{key}'")
    for key in required:
        if key not in section:
            raise ConfigParseError(f"missing field '{path}{key}'")


def _as_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigParseError(f"field '{path}' must be an integer, got {value!r}")
    return value


def _as_float(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigParseError(f"field '{path}' must be a number, got {value!r}")
    return float(value)


def _as_str(value, path: str) -> str:
    if not isinstance(value, str):
        raise ConfigParseError(f"field '{path}' must be a string, got {value!r}")
    return value


def _as_bool(value, path: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigParseError(f"field '{path}' must be a boolean, got {value!r}")
    return value


def parse_config(raw: dict) -> ExperimentConfig:
    """Validate a parsed JSON document into an :class:`ExperimentConfig`."""
    if not isinstance(raw, dict):
        raise ConfigParseError(f"config root must be an object, got {type(raw).__name__}")
    _require_keys(raw, "", _TOP_KEYS)

    model_raw = raw["model"]
    if not isinstance(model_raw, dict):
        raise ConfigParseError("field 'model' must be an object")
    _require_keys(model_raw, "model.", _MODEL_KEYS, _MODEL_OPTIONAL_KEYS)
    try:
        model = ModelSpec(
            n=_as_int(model_raw["n"], "model.n"),
            delta_e=_as_float(model_raw["delta_e"], "model.delta_e"),
            v_kind=_as_str(model_raw["v_kind"], "model.v_kind"),
            v_scale=_as_float(model_raw["v_scale"], "model.v_scale"),
            seed=_as_int(model_raw["seed"], "model.seed"),
            v_diagonal=_as_str(model_raw.get("v_diagonal", "default"), "model.v_diagonal"),
        )
    except ConfigParseError:
        raise
    except (TyplabError, ValueError) as exc:
        raise ConfigParseError(f"field 'model': {exc}") from exc

    d = _as_float(raw["d"], "d")
    if not -1 < d < 1:
        raise ConfigParseError(f"field 'd' must satisfy |d| < 1, got {d}")

    m = _as_int(raw["M"], "M")
    if m < 2:
        raise ConfigParseError(f"field 'M' must be >= 2 (variance needs it), got {m}")

    time_raw = raw["time"]
    if not isinstance(time_raw, dict):
        raise ConfigParseError("field 'time' must be an object")
    _require_keys(time_raw, "time.", _TIME_KEYS)
    t_max = _as_float(time_raw["t_max"], "time.t_max")
    points = _as_int(time_raw["points"], "time.points")
    if not t_max > 0:
        raise ConfigParseError(f"field 'time.t_max' must be > 0, got {t_max}")
    if points < 2:
        raise ConfigParseError(f"field 'time.points' must be >= 2, got {points}")

    base_seed = _as_int(raw["base_seed"], "base_seed")
    if not 0 <= base_seed < 2**64:
        raise ConfigParseError(f"field 'base_seed' must fit in 64 bits, got {base_seed}")

    output_raw = raw["output"]
    if not isinstance(output_raw, dict):
        raise ConfigParseError("field 'output' must be an object")
    _require_keys(output_raw, "output.", _OUTPUT_KEYS)
    output = OutputSettings(
        directory=_as_str(output_raw["directory"], "output.directory"),
        emit_trajectories=_as_bool(output_raw["emit_trajectories"], "output.emit_trajectories"),
        emit_plot=_as_bool(output_raw["emit_plot"], "output.emit_plot"),
    )

    return ExperimentConfig(
        model=model,
        d=d,
        num_trajectories=m,
        time=TimeSettings(t_max=t_max, points=points),
        base_seed=base_seed,
        output=output,
    )


def load_config(path: str | Path) -> ExperimentConfig:
    """Load and validate a JSON config file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigParseError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return parse_config(raw)


def config_as_dict(config: ExperimentConfig) -> dict:
    """The JSON-shaped echo of a config (for run metadata)."""
    return {
        "model": {
            "n": config.model.n,
            "delta_e": config.model.delta_e,
            "v_kind": config.model.v_kind,
            "v_scale": config.model.v_scale,
            "seed": config.model.seed,
            "v_diagonal": config.model.v_diagonal,
        },
        "d": config.d,
        "M": config.num_trajectories,
        "time": {"t_max": config.time.t_max, "points": config.time.points},
        "base_seed": config.base_seed,
        "output": {
            "directory": config.output.directory,
            "emit_trajectories": config.output.emit_trajectories,
            "emit_plot": config.output.emit_plot,
        },
    }
