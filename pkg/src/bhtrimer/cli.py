"""Command-line front end.

    bhtrimer simulate <config.toml> [--out DIR] [--n-traj N] [--seed S]
                      [--dt X] [--representation wigner|positive_p]
    bhtrimer compare <a.csv> <b.csv> [--out DIR]
    bhtrimer reproduce <preset> [--out DIR] [--scale F]

Exit codes: 0 success, 1 runtime/numerical failure, 2 usage or
configuration error. The worker count defaults to the BHTRIMER_WORKERS
environment variable (or 1); results are bit-identical for a given seed
regardless of the worker count.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .dynamics import DivergenceError, default_workers, run_ensemble
from .io import (
    load_scenario,
    read_distribution_csv,
    write_comparison_csv,
    write_distribution_csv,
    write_moments_csv,
)
from .model import ScenarioError
from .presets import PRESET_NAMES, run_preset
from .statistics import (
    StatisticsError,
    bhattacharyya_coefficient,
    bhattacharyya_distance,
    moment_series,
    snapshot_distribution,
)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bhtrimer",
        description="Phase-space simulator for the three-well Bose-Hubbard chain.",
    )
    parser.add_argument("--workers", type=int, default=None,
                        help="worker processes (default: BHTRIMER_WORKERS or 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one scenario file and write CSVs")
    sim.add_argument("config", help="scenario TOML file")
    sim.add_argument("--out", default=".", help="output directory")
    sim.add_argument("--n-traj", type=int, default=None)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--dt", type=float, default=None)
    sim.add_argument("--representation", choices=("wigner", "positive_p"), default=None)

    cmp_ = sub.add_parser("compare", help="Bhattacharyya B and D of two distribution CSVs")
    cmp_.add_argument("dist_a")
    cmp_.add_argument("dist_b")
    cmp_.add_argument("--out", default=None, help="directory for comparison.csv")

    rep = sub.add_parser("reproduce", help="run a preset and write its artifact set")
    rep.add_argument("preset")
    rep.add_argument("--out", default=".", help="output directory")
    rep.add_argument("--scale", type=float, default=0.1,
                     help="fraction of the full-size trajectory counts (default 0.1)")
    return parser


def _cmd_simulate(args) -> int:
    config = Path(args.config)
    if not config.is_file():
        print(f"error: file not found: {config}", file=sys.stderr)
        return EXIT_USAGE
    scenario = load_scenario(config)
    overrides = {}
    if args.n_traj is not None:
        overrides["n_traj"] = args.n_traj
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.dt is not None:
        overrides["dt"] = args.dt
    if args.representation is not None:
        overrides["representation"] = args.representation
    if overrides:
        scenario = scenario.with_overrides(**overrides)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    t0 = time.perf_counter()
    result = run_ensemble(scenario, workers=args.workers)
    wall = time.perf_counter() - t0
    write_moments_csv(out_dir / "moments.csv", moment_series(result))
    written = ["moments.csv"]
    for t in scenario.measure_times:
        dist = snapshot_distribution(result, t)
        fname = f"dist_w{scenario.measure_well}_t{t:g}.csv"
        write_distribution_csv(out_dir / fname, dist)
        written.append(fname)
    print(
        f"completed {result.n_completed}/{scenario.n_traj} trajectories "
        f"({result.n_discarded} discarded) in {wall:.1f} s, seed {scenario.seed}"
    )
    if result.unreliable:
        print(
            f"warning: discard fraction {result.discard_fraction:.2%} exceeds 0.1%; "
            "results unreliable",
            file=sys.stderr,
        )
    print(f"wrote {', '.join(written)} to {out_dir}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    for p in (args.dist_a, args.dist_b):
        if not Path(p).is_file():
            print(f"error: file not found: {p}", file=sys.stderr)
            return EXIT_USAGE
    d1 = read_distribution_csv(args.dist_a)
    d2 = read_distribution_csv(args.dist_b)
    b = bhattacharyya_coefficient(d1, d2)
    d = bhattacharyya_distance(d1, d2)
    label = f"{Path(args.dist_a).stem}_vs_{Path(args.dist_b).stem}"
    print(f"B = {b:.6f}")
    print(f"D = {d:.6f}")
    if args.out is not None:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        # no raw samples in a binned CSV, so no bootstrap error here
        write_comparison_csv(
            out_dir / "comparison.csv",
            [{"pair_label": label, "B": b, "B_err": float("nan"), "D": d}],
        )
        print(f"wrote comparison.csv to {out_dir}")
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    if args.preset not in PRESET_NAMES:
        print(
            f"error: unknown preset {args.preset!r}; valid presets: "
            f"{', '.join(PRESET_NAMES)}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    run_preset(args.preset, args.out, scale=args.scale, workers=args.workers)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.workers is None:
        args.workers = default_workers()
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "compare":
            return _cmd_compare(args)
        return _cmd_reproduce(args)
    except (ScenarioError, StatisticsError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DivergenceError, ArithmeticError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
