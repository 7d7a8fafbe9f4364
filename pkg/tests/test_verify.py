from pathlib import Path

import numpy as np
import pytest

from typlab.config import load_config, parse_config
from typlab.operators import HermitianOperator
from typlab.verify import format_report, run_verification

VERIFY_CONFIG = Path(__file__).resolve().parent.parent / "configs" / "verify_small.json"


@pytest.fixture(scope="module")
def small_results():
    return run_verification(load_config(VERIFY_CONFIG))


def tiny_raw(**overrides):
    raw = {
        "model": {
            "n": 60,
            "delta_e": 8.33e-3,
            "v_kind": "gaussian",
            "v_scale": 2.25e-4,
            "seed": 7,
        },
        "d": 0.1,
        "M": 100,
        "time": {"t_max": 30.0, "points": 50},
        "base_seed": 2026,
        "output": {"directory": "unused", "emit_trajectories": False, "emit_plot": False},
    }
    raw.update(overrides)
    return raw


def test_small_config_all_checks_pass(small_results):
    failed = [r.name for r in small_results if not r.passed]
    assert failed == []


def test_expected_check_names(small_results):
    names = [r.name for r in small_results]
    assert names == [
        "moment-gate",
        "uniform-mean",
        "uniform-variance",
        "omega-norm-mean",
        "omega-norm-variance",
        "omega-mean-qev",
        "bound-exact",
        "bound-sampled",
        "commuting-invariance",
        "picture-equivalence",
        "inverse-n-scaling",
    ]


def test_report_format(small_results):
    report = format_report(small_results)
    assert report.count("[PASS]") == len(small_results)
    assert "11/11 checks passed" in report


def test_zero_deviation_targets_zero_mean():
    results = run_verification(parse_config(tiny_raw(d=0.0)))
    by_name = {r.name: r for r in results}
    qev = by_name["omega-mean-qev"]
    assert qev.passed
    assert "analytic 0.000000" in qev.measured
    assert by_name["moment-gate"].passed
    assert by_name["omega-norm-mean"].passed


def test_corrupted_observable_fails_moment_gate():
    config = parse_config(tiny_raw())
    corrupted = HermitianOperator(np.eye(60))  # c1 = 1, trace-free gate broken
    results = run_verification(config, observable_override=corrupted)
    by_name = {r.name: r for r in results}
    assert not by_name["moment-gate"].passed
    assert "c1" in by_name["moment-gate"].measured
    report = format_report(results)
    assert "first failing: moment-gate" in report
