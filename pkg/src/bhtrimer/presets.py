"""Canned scenarios that regenerate the reference figures and tables.

Each preset bundles the scenarios, the output-file manifest, and (where
published reference numbers exist) the values the summary compares
against. The three (chi, N) working points pair chi = 1e-2 with
N1(0) = N3(0) = 20, 1e-3 with 100, and 1e-4 with 1000; all binned
distributions are snapshotted at the first time of maximum transfer,
Jt = 1.11.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from pathlib import Path

from .dynamics import run_ensemble
from .io import write_comparison_csv, write_distribution_csv, write_moments_csv
from .model import ModelParams, Scenario, ScenarioError, StateSpec
from .statistics import (
    bhattacharyya_coefficient,
    bhattacharyya_distance,
    bin_distribution,
    bootstrap_coefficient_error,
    moment_series,
)

PRESET_NAMES = ("fig1", "fig2", "fig3", "fig4", "table_b", "table_d")

T_PEAK = 1.11  # first time of maximum transfer (J*t)
SQUEEZING_R = 0.5
CHI_TO_N = {1e-2: 20, 1e-3: 100, 1e-4: 1000}

# reference Bhattacharyya coefficients, keyed (pair, chi)
REFERENCE_B = {
    ("FC", 1e-2): 0.531, ("FC", 1e-3): 0.403, ("FC", 1e-4): 0.287,
    ("FS", 1e-2): 0.484, ("FS", 1e-3): 0.364, ("FS", 1e-4): 0.259,
    ("CS", 1e-2): 0.947, ("CS", 1e-3): 0.942, ("CS", 1e-4): 0.939,
}
REFERENCE_D = {
    ("FC", 1e-2): 0.633, ("FC", 1e-3): 0.909, ("FC", 1e-4): 1.25,
    ("FS", 1e-2): 0.726, ("FS", 1e-3): 1.01, ("FS", 1e-4): 1.35,
    ("CS", 1e-2): 0.055, ("CS", 1e-3): 0.060, ("CS", 1e-4): 0.063,
}
# Fock vs pi/2-phase-difference coherent pair at chi=1e-3, N=100
REFERENCE_FIG4 = {"B": 0.407, "D": 0.899}

_BASE_SEED = 777


def _outer_state(kind: str, n: int, phase3: float = 0.0) -> tuple[StateSpec, StateSpec, StateSpec]:
    kw = {"r": SQUEEZING_R} if kind == "squeezed" else {}
    return (
        StateSpec(kind=kind, n=n, **kw),
        StateSpec(kind="vacuum"),
        StateSpec(kind=kind, n=n, phase=phase3, **kw),
    )


def _dist_scenario(kind: str, chi: float, n_traj: int, seed: int, phase3: float = 0.0) -> Scenario:
    n = CHI_TO_N[chi]
    return Scenario(
        params=ModelParams(chi=chi),
        wells=_outer_state(kind, n, phase3),
        representation="wigner",
        t_final=T_PEAK,
        dt=1e-3,
        n_traj=n_traj,
        seed=seed,
        measure_times=(T_PEAK,),
        bin_width=1.0,
        measure_well=2,
    )


@dataclass
class PresetRun:
    name: str
    out_dir: Path
    n_traj: dict[str, int]
    manifest: list[Path] = field(default_factory=list)
    comparisons: list[dict] = field(default_factory=list)
    discard_fractions: dict[str, float] = field(default_factory=dict)
    wall_time: float = 0.0


def preset_scenarios(name: str, scale: float = 0.1) -> dict[str, Scenario]:
    """The labelled scenarios a preset runs, with n_traj scaled down from
    the full-size reference runs (scale 1.0 = 1e6 trajectories for the
    mean-field curves, 1e7 for the binned distributions)."""
    if name not in PRESET_NAMES:
        raise ScenarioError(
            f"unknown preset {name!r}; valid presets: {', '.join(PRESET_NAMES)}"
        )
    if not (0.0 < scale <= 1.0):
        raise ScenarioError("scale must be in (0, 1]")
    curves = max(1, int(round(1e6 * scale)))
    dists = max(1, int(round(1e7 * scale)))
    out: dict[str, Scenario] = {}
    if name == "fig1":
        for k, kind in enumerate(("fock", "coherent", "squeezed")):
            kw = {"r": SQUEEZING_R} if kind == "squeezed" else {}
            out[kind] = Scenario(
                params=ModelParams(chi=1e-4),
                wells=_outer_state(kind, 1000),
                representation="positive_p",
                t_final=3.0,
                dt=1e-3,
                n_traj=curves,
                seed=_BASE_SEED + k,
                chunk_size=1024,
            )
    elif name in ("fig2", "fig3"):
        chi = 1e-3 if name == "fig2" else 1e-4
        for k, kind in enumerate(("fock", "coherent", "squeezed")):
            out[kind] = _dist_scenario(kind, chi, dists, _BASE_SEED + 10 + k)
    elif name == "fig4":
        out["fock"] = _dist_scenario("fock", 1e-3, dists, _BASE_SEED + 20)
        out["coherent_pi2"] = _dist_scenario(
            "coherent", 1e-3, dists, _BASE_SEED + 21, phase3=math.pi / 2
        )
    else:  # table_b / table_d share the nine distribution runs
        for c, chi in enumerate((1e-2, 1e-3, 1e-4)):
            for k, kind in enumerate(("fock", "coherent", "squeezed")):
                out[f"chi{chi:g}_{kind}"] = _dist_scenario(
                    kind, chi, dists, _BASE_SEED + 30 + 10 * c + k
                )
    return out


def preset_manifest(name: str, out_dir: str | Path) -> list[Path]:
    """Every CSV the preset writes."""
    out_dir = Path(out_dir)
    scen = preset_scenarios(name)
    files = []
    for label in scen:
        files.append(out_dir / f"{name}_{label}_moments.csv")
        if scen[label].measure_times:
            files.append(out_dir / f"{name}_{label}_dist.csv")
    if name in ("fig4", "table_b", "table_d"):
        files.append(out_dir / f"{name}_comparison.csv")
        files.append(out_dir / f"{name}_summary.csv")
    return files


def _pair_rows(name: str, dists, samples, bin_width, seed):
    """Bhattacharyya rows for the preset's distribution pairs."""
    if name == "fig4":
        pairs = [("Fphi", "fock", "coherent_pi2")]
    else:
        pairs = []
        for chi in (1e-2, 1e-3, 1e-4):
            p = f"chi{chi:g}"
            pairs += [
                (f"{p}_FC", f"{p}_fock", f"{p}_coherent"),
                (f"{p}_FS", f"{p}_fock", f"{p}_squeezed"),
                (f"{p}_CS", f"{p}_coherent", f"{p}_squeezed"),
            ]
    rows = []
    for label, a, b in pairs:
        bc = bhattacharyya_coefficient(dists[a], dists[b])
        err = bootstrap_coefficient_error(samples[a], samples[b], bin_width, seed=seed)
        rows.append(
            {
                "pair_label": label,
                "B": bc,
                "B_err": err,
                "D": bhattacharyya_distance(dists[a], dists[b]),
            }
        )
    return rows


def _reference_for(name: str, label: str) -> tuple[float, float]:
    if name == "fig4":
        return REFERENCE_FIG4["B"], REFERENCE_FIG4["D"]
    prefix, pair = label.rsplit("_", 1)
    chi = float(prefix.removeprefix("chi"))
    return REFERENCE_B[(pair, chi)], REFERENCE_D[(pair, chi)]


def run_preset(
    name: str,
    out_dir: str | Path,
    scale: float = 0.1,
    workers: int | None = None,
    log=print,
) -> PresetRun:
    """Run every scenario of a preset and write its full artifact set."""
    t0 = time.perf_counter()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    scenarios = preset_scenarios(name, scale)
    run = PresetRun(
        name=name, out_dir=out_dir, n_traj={k: s.n_traj for k, s in scenarios.items()}
    )
    dists = {}
    samples = {}
    bin_width = 1.0
    for label, scenario in scenarios.items():
        log(f"[{name}] {label}: {scenario.n_traj} trajectories "
            f"({scenario.representation}, chi={scenario.params.chi:g})")
        result = run_ensemble(scenario, workers=workers)
        run.discard_fractions[label] = result.discard_fraction
        if result.unreliable:
            log(f"[{name}] {label}: WARNING {result.n_discarded} trajectories "
                f"discarded ({result.discard_fraction:.2%}); results unreliable")
        mpath = out_dir / f"{name}_{label}_moments.csv"
        write_moments_csv(mpath, moment_series(result))
        run.manifest.append(mpath)
        if scenario.measure_times:
            t = scenario.measure_times[0]
            raw = result.snapshots[t][:, scenario.measure_well - 1]
            samples[label] = raw
            bin_width = scenario.bin_width
            dist = bin_distribution(raw, bin_width, well=scenario.measure_well, time=t)
            dists[label] = dist
            dpath = out_dir / f"{name}_{label}_dist.csv"
            write_distribution_csv(dpath, dist)
            run.manifest.append(dpath)

    if name in ("fig4", "table_b", "table_d"):
        rows = _pair_rows(name, dists, samples, bin_width, seed=_BASE_SEED)
        cpath = out_dir / f"{name}_comparison.csv"
        write_comparison_csv(cpath, rows)
        run.manifest.append(cpath)
        run.comparisons = rows
        # summary against the reference values
        spath = out_dir / f"{name}_summary.csv"
        lines = ["pair_label,B,B_err,D,B_ref,D_ref,n_traj"]
        log(f"[{name}] pair       B        +/-       D        (ref B, ref D)")
        for r in rows:
            b_ref, d_ref = _reference_for(name, r["pair_label"])
            r["B_ref"], r["D_ref"] = b_ref, d_ref
            lines.append(
                f"{r['pair_label']},{r['B']:.6f},{r['B_err']:.6f},"
                f"{r['D']:.6f},{b_ref},{d_ref},{max(run.n_traj.values())}"
            )
            log(f"[{name}] {r['pair_label']:<10} {r['B']:.4f}  {r['B_err']:.4f}  "
                f"{r['D']:.4f}   ({b_ref}, {d_ref})")
        Path(spath).write_text("\n".join(lines) + "\n")
        run.manifest.append(spath)

    run.wall_time = time.perf_counter() - t0
    log(f"[{name}] done in {run.wall_time:.1f} s; wrote {len(run.manifest)} files")
    return run
