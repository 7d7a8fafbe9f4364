"""CSV emission and parsing for run outputs.

Numbers are written as the shortest decimal that round-trips binary64
(Python's ``repr``), so files are a bit-exact interface: equal runs produce
byte-identical files, and reading them back loses nothing.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .errors import CsvFormatError

STATS_HEADER = ["t", "mean", "variance", "bound"]


def format_number(x: float) -> str:
    return repr(float(x))


def trajectories_header(num_trajectories: int) -> list[str]:
    return ["t"] + [f"traj_{i}" for i in range(num_trajectories)]


def write_stats_csv(
    path: str | Path,
    times: np.ndarray,
    mean: np.ndarray,
    variance: np.ndarray,
    bound: float,
) -> None:
    """Write the per-time ensemble statistics; the bound column repeats the
    time-independent analytic value on every row."""
    bound_str = format_number(bound)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(STATS_HEADER)
        for t, m, v in zip(times, mean, variance):
            writer.writerow([format_number(t), format_number(m), format_number(v), bound_str])


def write_trajectories_csv(
    path: str | Path, times: np.ndarray, values: np.ndarray
) -> None:
    """Write per-trajectory series; ``values`` has shape (M, len(times))."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(trajectories_header(values.shape[0]))
        for k, t in enumerate(times):
            writer.writerow([format_number(t)] + [format_number(v) for v in values[:, k]])


def _read_rows(path: str | Path) -> list[list[str]]:
    try:
        with open(path, newline="") as handle:
            rows = list(csv.reader(handle))
    except OSError as exc:
        raise CsvFormatError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise CsvFormatError(f"{path} is empty")
    return rows


def _parse_float(cell: str, row: int) -> float:
    try:
        return float(cell)
    except ValueError as exc:
        raise CsvFormatError(f"non-numeric value {cell!r}", row=row) from exc


def read_stats_csv(path: str | Path) -> dict[str, np.ndarray]:
    """Read a stats file back into arrays keyed by column name."""
    rows = _read_rows(path)
    if rows[0] != STATS_HEADER:
        raise CsvFormatError(f"expected header {','.join(STATS_HEADER)!r}, got {','.join(rows[0])!r}", row=1)
    if len(rows) < 2:
        raise CsvFormatError(f"{path} has a header but no data rows")
    data = []
    for k, row in enumerate(rows[1:], start=2):
        if len(row) != len(STATS_HEADER):
            raise CsvFormatError(f"expected {len(STATS_HEADER)} columns, got {len(row)}", row=k)
        data.append([_parse_float(cell, k) for cell in row])
    arr = np.asarray(data)
    return {name: arr[:, i] for i, name in enumerate(STATS_HEADER)}


def read_trajectories_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Read a trajectories file; returns (times, values) with values shaped
    (M, len(times))."""
    rows = _read_rows(path)
    header = rows[0]
    if len(header) < 2 or header != trajectories_header(len(header) - 1):
        raise CsvFormatError(
            f"expected header 't,traj_0,...', got {','.join(header[:4])!r}", row=1
        )
    if len(rows) < 2:
        raise CsvFormatError(f"{path} has a header but no data rows")
    data = []
    for k, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise CsvFormatError(f"expected {len(header)} columns, got {len(row)}", row=k)
        data.append([_parse_float(cell, k) for cell in row])
    arr = np.asarray(data)
    return arr[:, 0], arr[:, 1:].T
