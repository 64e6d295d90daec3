"""Readers for the simulator's CSV artifact formats.

This package talks to the simulator only through its documented CSV
files; it never imports the simulation code.

    moments:      header t,N1_mean,N1_err,N2_mean,N2_err,N3_mean,N3_err
    distribution: '#'-prefixed metadata lines, then header n,p
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

MOMENTS_HEADER = "t,N1_mean,N1_err,N2_mean,N2_err,N3_mean,N3_err"


class FigureInputError(ValueError):
    """A required input file is missing or malformed."""


@dataclass(frozen=True)
class MomentsTable:
    times: np.ndarray
    mean: np.ndarray    # (n_times, 3)
    stderr: np.ndarray  # (n_times, 3)


@dataclass(frozen=True)
class DistributionTable:
    centers: np.ndarray
    probs: np.ndarray
    bin_width: float
    time: float
    well: int


def _require(path: str | Path) -> Path:
    path = Path(path)
    if not path.is_file():
        raise FigureInputError(f"missing input file: {path}")
    return path


def read_moments(path: str | Path) -> MomentsTable:
    path = _require(path)
    lines = path.read_text().strip().splitlines()
    if not lines or lines[0].strip() != MOMENTS_HEADER:
        raise FigureInputError(f"{path}: not a moments CSV")
    try:
        data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    except ValueError as exc:
        raise FigureInputError(f"{path}: malformed moments CSV: {exc}") from exc
    if data.ndim != 2 or data.shape[1] != 7:
        raise FigureInputError(f"{path}: malformed moments CSV")
    return MomentsTable(times=data[:, 0], mean=data[:, 1::2], stderr=data[:, 2::2])


def read_distribution(path: str | Path) -> DistributionTable:
    path = _require(path)
    meta: dict[str, str] = {}
    rows: list[tuple[float, float]] = []
    saw_header = False
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
            continue
        if line == "n,p":
            saw_header = True
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise FigureInputError(f"{path}: malformed distribution row {line!r}")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise FigureInputError(f"{path}: malformed distribution row {line!r}") from exc
    if not saw_header or not rows:
        raise FigureInputError(f"{path}: not a distribution CSV")
    arr = np.array(rows)
    return DistributionTable(
        centers=arr[:, 0],
        probs=arr[:, 1],
        bin_width=float(meta.get("bin_width", 1.0)),
        time=float(meta.get("time", 0.0)),
        well=int(meta.get("well", 0)),
    )
