import xml.dom.minidom

import numpy as np
import pytest

from typlab.svgplot import render_figure


@pytest.fixture
def stats():
    times = np.linspace(0.0, 10.0, 30)
    return {
        "t": times,
        "mean": 0.2 * np.exp(-times / 4),
        "variance": 1e-3 * (1 + 0.2 * np.sin(times)),
        "bound": np.full(30, 2.4e-3),
    }


def test_svg_is_wellformed_xml(stats):
    svg = render_figure(stats)
    xml.dom.minidom.parseString(svg)


def test_mean_and_inset_without_trajectories(stats):
    svg = render_figure(stats)
    assert svg.count("<polyline") == 2  # mean + variance inset
    assert "stroke-dasharray" in svg  # the bound line


def test_trajectories_rendered_in_gray(stats):
    trajectories = (stats["t"], np.vstack([stats["mean"] * s for s in (0.8, 1.0, 1.2)]))
    svg = render_figure(stats, trajectories)
    assert svg.count("<polyline") == 5  # 3 trajectories + mean + variance
    assert svg.count("#b3b3b3") == 3


def test_deterministic_output(stats):
    trajectories = (stats["t"], np.vstack([stats["mean"], stats["mean"] * 0.5]))
    assert render_figure(stats, trajectories) == render_figure(stats, trajectories)
