"""Scenario files and CSV artifacts.

Scenario files are TOML with the layout

    [model]            chi, j
    [wells.1] .. [wells.3]   kind, n, phase, r
    [run]              representation, t_final, dt, n_traj, seed
                       (optional: sample_stride, pp_scheme, chunk_size)
    [measure]          times, bin_width, well

CSV artifacts (written with full float precision so they round-trip
bit-exactly):

    moments:      t,N1_mean,N1_err,N2_mean,N2_err,N3_mean,N3_err
    distribution: '#'-prefixed metadata lines, then header n,p
    comparison:   pair_label,B,B_err,D
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .model import ModelParams, Scenario, ScenarioError, StateSpec
from .statistics import MomentSeries, NumberDistribution, StatisticsError

_FLOAT_FMT = "%.17g"


def _fmt(x: float) -> str:
    return _FLOAT_FMT % x


# ---------------------------------------------------------------- scenarios

def parse_scenario(config_text: str) -> Scenario:
    """Parse and validate a scenario document, filling documented defaults
    (j=1, dt=1e-3, representation=wigner, phase=0, seed=0)."""
    try:
        doc = tomllib.loads(config_text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"malformed scenario file: {exc}") from exc

    model = doc.get("model", {})
    if "chi" not in model:
        raise ScenarioError("missing required key model.chi")
    params = ModelParams(chi=float(model["chi"]), j_tunnel=float(model.get("j", 1.0)))

    wells_doc = doc.get("wells")
    if not wells_doc:
        raise ScenarioError("missing [wells.1]..[wells.3] sections")
    wells = []
    for idx in ("1", "2", "3"):
        if idx not in wells_doc:
            raise ScenarioError(f"missing [wells.{idx}] section")
        w = wells_doc[idx]
        if "kind" not in w:
            raise ScenarioError(f"missing wells.{idx}.kind")
        wells.append(
            StateSpec(
                kind=str(w["kind"]),
                n=float(w.get("n", 0.0)),
                phase=float(w.get("phase", 0.0)),
                r=float(w.get("r", 0.0)),
            )
        )

    run = doc.get("run", {})
    for key in ("t_final", "n_traj"):
        if key not in run:
            raise ScenarioError(f"missing required key run.{key}")
    measure = doc.get("measure", {})
    return Scenario(
        params=params,
        wells=tuple(wells),
        representation=str(run.get("representation", "wigner")),
        t_final=float(run["t_final"]),
        dt=float(run.get("dt", 1e-3)),
        n_traj=int(run["n_traj"]),
        seed=int(run.get("seed", 0)),
        measure_times=tuple(float(t) for t in measure.get("times", ())),
        bin_width=float(measure.get("bin_width", 1.0)),
        measure_well=int(measure.get("well", 2)),
        sample_stride=int(run.get("sample_stride", 0)),
        pp_scheme=str(run.get("pp_scheme", "midpoint")),
        chunk_size=int(run.get("chunk_size", 8192)),
    )


def serialize_scenario(s: Scenario) -> str:
    """Render a Scenario back to its TOML form (parse round-trips)."""
    lines = ["[model]", f"chi = {_fmt(s.params.chi)}", f"j = {_fmt(s.params.j_tunnel)}", ""]
    for i, w in enumerate(s.wells, start=1):
        lines += [f"[wells.{i}]", f'kind = "{w.kind}"', f"n = {_fmt(w.n)}"]
        lines += [f"phase = {_fmt(w.phase)}", f"r = {_fmt(w.r)}", ""]
    lines += [
        "[run]",
        f'representation = "{s.representation}"',
        f"t_final = {_fmt(s.t_final)}",
        f"dt = {_fmt(s.dt)}",
        f"n_traj = {s.n_traj}",
        f"seed = {s.seed}",
        f"sample_stride = {s.sample_stride}",
        f'pp_scheme = "{s.pp_scheme}"',
        f"chunk_size = {s.chunk_size}",
        "",
        "[measure]",
        "times = [" + ", ".join(_fmt(t) for t in s.measure_times) + "]",
        f"bin_width = {_fmt(s.bin_width)}",
        f"well = {s.measure_well}",
        "",
    ]
    return "\n".join(lines)


def load_scenario(path: str | Path) -> Scenario:
    return parse_scenario(Path(path).read_text())


# ---------------------------------------------------------------- moments

def write_moments_csv(path: str | Path, series: MomentSeries) -> None:
    lines = ["t,N1_mean,N1_err,N2_mean,N2_err,N3_mean,N3_err"]
    for k, t in enumerate(series.times):
        row = [_fmt(t)]
        for w in range(3):
            row += [_fmt(series.mean[k, w]), _fmt(series.stderr[k, w])]
        lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_moments_csv(path: str | Path) -> MomentSeries:
    raw = Path(path).read_text().strip().splitlines()
    header = "t,N1_mean,N1_err,N2_mean,N2_err,N3_mean,N3_err"
    if not raw or raw[0].strip() != header:
        raise StatisticsError(f"{path}: not a moments CSV")
    data = np.array([[float(v) for v in line.split(",")] for line in raw[1:]])
    if data.ndim != 2 or data.shape[1] != 7:
        raise StatisticsError(f"{path}: malformed moments CSV")
    mean = data[:, 1::2]
    stderr = data[:, 2::2]
    return MomentSeries(
        times=data[:, 0],
        mean=mean,
        variance=np.full_like(mean, np.nan),
        stderr=stderr,
        sample_count=0,
    )


# ---------------------------------------------------------------- distributions

def write_distribution_csv(path: str | Path, dist: NumberDistribution) -> None:
    lines = [
        f"# bin_width: {_fmt(dist.bin_width)}",
        f"# sample_count: {dist.sample_count}",
        f"# clamp_fraction: {_fmt(dist.clamp_fraction)}",
        f"# well: {dist.well}",
        f"# time: {_fmt(dist.time)}",
        "n,p",
    ]
    for c, p in zip(dist.centers, dist.probs):
        lines.append(f"{_fmt(c)},{_fmt(p)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_distribution_csv(path: str | Path) -> NumberDistribution:
    meta = {}
    rows = []
    saw_header = False
    for line in Path(path).read_text().splitlines():
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
            raise StatisticsError(f"{path}: malformed distribution row {line!r}")
        rows.append((float(parts[0]), float(parts[1])))
    if not saw_header or not rows:
        raise StatisticsError(f"{path}: not a distribution CSV")
    bin_width = float(meta.get("bin_width", 1.0))
    probs = np.zeros(int(round(rows[-1][0] / bin_width)) + 1)
    for c, p in rows:
        probs[int(round(c / bin_width))] = p
    return NumberDistribution(
        probs=probs,
        bin_width=bin_width,
        sample_count=int(meta.get("sample_count", 0)),
        clamp_fraction=float(meta.get("clamp_fraction", 0.0)),
        well=int(meta.get("well", 0)),
        time=float(meta.get("time", 0.0)),
    )


# ---------------------------------------------------------------- comparisons

def write_comparison_csv(path: str | Path, rows: list[dict]) -> None:
    """rows: dicts with pair_label, B, B_err (may be nan), D."""
    lines = ["pair_label,B,B_err,D"]
    for r in rows:
        lines.append(
            f"{r['pair_label']},{_fmt(r['B'])},{_fmt(r['B_err'])},{_fmt(r['D'])}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_comparison_csv(path: str | Path) -> list[dict]:
    raw = Path(path).read_text().strip().splitlines()
    if not raw or raw[0].strip() != "pair_label,B,B_err,D":
        raise StatisticsError(f"{path}: not a comparison CSV")
    out = []
    for line in raw[1:]:
        label, b, berr, d = line.split(",")
        out.append(
            {"pair_label": label, "B": float(b), "B_err": float(berr), "D": float(d)}
        )
    return out
