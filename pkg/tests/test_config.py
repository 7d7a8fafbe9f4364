import json

import pytest

from typlab.config import load_config, parse_config
from typlab.errors import ConfigParseError


def valid_raw():
    return {
        "model": {
            "n": 60,
            "delta_e": 8.33e-3,
            "v_kind": "gaussian",
            "v_scale": 2.25e-4,
            "seed": 7,
        },
        "d": 0.1,
        "M": 6,
        "time": {"t_max": 30.0, "points": 40},
        "base_seed": 5,
        "output": {"directory": "out", "emit_trajectories": True, "emit_plot": False},
    }


def test_valid_config_roundtrip(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(valid_raw()))
    cfg = load_config(path)
    assert cfg.model.n == 60
    assert cfg.model.v_diagonal == "default"
    assert cfg.num_trajectories == 6
    assert cfg.time.points == 40
    assert cfg.output.emit_trajectories is True


def test_optional_diagonal_mode():
    raw = valid_raw()
    raw["model"]["v_diagonal"] = "zero"
    assert parse_config(raw).model.v_diagonal == "zero"


@pytest.mark.parametrize(
    "drop,needle",
    [
        (("model", "delta_e"), "model.delta_e"),
        (("time", "points"), "time.points"),
        (("output", "directory"), "output.directory"),
    ],
)
def test_missing_nested_field_named(drop, needle):
    raw = valid_raw()
    del raw[drop[0]][drop[1]]
    with pytest.raises(ConfigParseError, match=needle):
        parse_config(raw)


def test_missing_top_field_named():
    raw = valid_raw()
    del raw["base_seed"]
    with pytest.raises(ConfigParseError, match="base_seed"):
        parse_config(raw)


def test_unknown_field_rejected():
    raw = valid_raw()
    raw["modle"] = {}
    with pytest.raises(ConfigParseError, match="unknown field 'modle'"):
        parse_config(raw)


def test_unknown_model_field_rejected():
    raw = valid_raw()
    raw["model"]["bandwidth"] = 2.0
    with pytest.raises(ConfigParseError, match="model.bandwidth"):
        parse_config(raw)


@pytest.mark.parametrize(
    "mutate,needle",
    [
        (lambda r: r["model"].__setitem__("n", "sixty"), "model.n"),
        (lambda r: r["model"].__setitem__("n", 61), "model"),
        (lambda r: r.__setitem__("M", 1), "M"),
        (lambda r: r.__setitem__("d", 1.5), "d"),
        (lambda r: r["time"].__setitem__("points", 1), "time.points"),
        (lambda r: r["time"].__setitem__("t_max", -3.0), "time.t_max"),
        (lambda r: r["output"].__setitem__("emit_plot", "yes"), "output.emit_plot"),
        (lambda r: r.__setitem__("base_seed", 2**64), "base_seed"),
        (lambda r: r.__setitem__("M", True), "M"),
    ],
)
def test_invalid_values_named(mutate, needle):
    raw = valid_raw()
    mutate(raw)
    with pytest.raises(ConfigParseError, match=needle):
        parse_config(raw)


def test_invalid_json_reports_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "model": \n}')
    with pytest.raises(ConfigParseError, match="line"):
        load_config(path)


def test_missing_file():
    with pytest.raises(ConfigParseError):
        load_config("/nonexistent/cfg.json")


def test_overrides():
    cfg = parse_config(valid_raw())
    patched = cfg.with_overrides(out_dir="elsewhere", base_seed=99)
    assert patched.output.directory == "elsewhere"
    assert patched.base_seed == 99
    # original untouched
    assert cfg.output.directory == "out"
    assert cfg.base_seed == 5
