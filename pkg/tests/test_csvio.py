import numpy as np
import pytest

from typlab.csvio import (
    format_number,
    read_stats_csv,
    read_trajectories_csv,
    write_stats_csv,
    write_trajectories_csv,
)
from typlab.errors import CsvFormatError


def test_format_number_roundtrips():
    for x in (0.1, 1 / 3, 8.33e-5, -2.25e-8, 1.0, 0.0):
        assert float(format_number(x)) == x


def test_stats_roundtrip_exact(tmp_path):
    path = tmp_path / "stats.csv"
    times = np.linspace(0.0, 7.0, 13)
    mean = np.sin(times) / 3
    variance = np.abs(np.cos(times)) * 1e-3
    write_stats_csv(path, times, mean, variance, bound=2.5e-3)
    data = read_stats_csv(path)
    assert np.array_equal(data["t"], times)
    assert np.array_equal(data["mean"], mean)
    assert np.array_equal(data["variance"], variance)
    assert np.all(data["bound"] == 2.5e-3)


def test_trajectories_roundtrip_exact(tmp_path):
    path = tmp_path / "traj.csv"
    times = np.linspace(0.0, 1.0, 5)
    values = np.arange(15, dtype=float).reshape(3, 5) / 7
    write_trajectories_csv(path, times, values)
    header = path.read_text().splitlines()[0]
    assert header == "t,traj_0,traj_1,traj_2"
    rt_times, rt_values = read_trajectories_csv(path)
    assert np.array_equal(rt_times, times)
    assert np.array_equal(rt_values, values)


def test_stats_header_enforced(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("time,avg,var,bnd\n0,0,0,0\n")
    with pytest.raises(CsvFormatError, match="header"):
        read_stats_csv(path)


def test_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(CsvFormatError, match="empty"):
        read_stats_csv(path)


def test_header_only(tmp_path):
    path = tmp_path / "header.csv"
    path.write_text("t,mean,variance,bound\n")
    with pytest.raises(CsvFormatError, match="no data"):
        read_stats_csv(path)


def test_non_numeric_cell_reports_row(tmp_path):
    path = tmp_path / "nan.csv"
    path.write_text("t,mean,variance,bound\n0.0,0.1,0.2,0.3\n1.0,oops,0.2,0.3\n")
    with pytest.raises(CsvFormatError, match="row 3"):
        read_stats_csv(path)


def test_short_row_reports_row(tmp_path):
    path = tmp_path / "short.csv"
    path.write_text("t,mean,variance,bound\n0.0,0.1,0.2\n")
    with pytest.raises(CsvFormatError, match="row 2"):
        read_stats_csv(path)


def test_trajectories_header_enforced(tmp_path):
    path = tmp_path / "bad_traj.csv"
    path.write_text("t,traj_0,traj_2\n0.0,1.0,2.0\n")
    with pytest.raises(CsvFormatError, match="header"):
        read_trajectories_csv(path)
