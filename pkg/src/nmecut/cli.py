"""Command-line interface.

Subcommands: overhead, decompose, verify, experiment, plot.  Exit codes:
0 success, 1 check or runtime failure, 2 usage error.  Numeric output uses
12 significant digits so golden-output tests stay stable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .channels import unitary_channel
from .errors import InvalidParameterError, NmecutError, OutOfRangeError
from .experiment import (
    DEFAULT_F_VALUES,
    DEFAULT_N_STATES,
    DEFAULT_SEED,
    DEFAULT_SHOT_GRID,
    CsvFormatError,
    ExperimentConfig,
    check_records,
    read_csv,
    render_svg,
    run_sweep,
    write_csv,
)
from .linalg import I2
from .qpd import (
    harada_wire_cut,
    nme_wire_cut,
    optimal_overhead,
    optimal_overhead_pure,
    reconstruct_channel,
)

SEED_ENV_VAR = "NMECUT_SEED"
VERIFY_TOL = 1e-10
USAGE_ERROR = 2
CHECK_FAILURE = 1


def _default_seed() -> int:
    value = os.environ.get(SEED_ENV_VAR)
    if value is None:
        return DEFAULT_SEED
    try:
        return int(value)
    except ValueError:
        return DEFAULT_SEED


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def cmd_overhead(args: argparse.Namespace) -> int:
    if (args.k is None) == (args.f is None):
        print("error: pass exactly one of --k or --f", file=sys.stderr)
        return USAGE_ERROR
    try:
        gamma = optimal_overhead_pure(args.k) if args.k is not None else optimal_overhead(args.f)
    except (InvalidParameterError, OutOfRangeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    print(_fmt(gamma))
    return 0


def cmd_decompose(args: argparse.Namespace) -> int:
    try:
        decomposition = nme_wire_cut(args.k)
    except InvalidParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    print(decomposition.describe())
    return 0


def _max_choi_deviation(decomposition) -> float:
    identity = unitary_channel(I2, name="identity").choi
    return float(np.abs(reconstruct_channel(decomposition) - identity).max())


def cmd_verify(args: argparse.Namespace) -> int:
    if args.all == (args.k is not None):
        print("error: pass exactly one of --k or --all", file=sys.stderr)
        return USAGE_ERROR
    cases: list[tuple[str, object]] = []
    if args.all:
        cases.append(("harada", harada_wire_cut()))
        ks = [round(0.1 * i, 10) for i in range(11)]
    else:
        ks = [args.k]
    try:
        for k in ks:
            cases.append((f"k={k:g}", nme_wire_cut(k)))
    except InvalidParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    worst = 0.0
    for label, decomposition in cases:
        deviation = _max_choi_deviation(decomposition)
        worst = max(worst, deviation)
        status = "ok" if deviation <= VERIFY_TOL else "FAIL"
        print(f"{label:<10} max-choi-deviation {deviation:.3e}  {status}")
    return 0 if worst <= VERIFY_TOL else CHECK_FAILURE


def _merge_experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    file_values: dict = {}
    if args.config is not None:
        with open(args.config, encoding="utf-8") as handle:
            file_values = json.load(handle)

    def pick(flag_value, key: str, default):
        if flag_value is not None:
            return flag_value
        if key in file_values:
            return file_values[key]
        return default

    return ExperimentConfig(
        f_values=tuple(pick(args.f, "f_values", DEFAULT_F_VALUES)),
        shot_grid=tuple(pick(args.shots, "shot_grid", DEFAULT_SHOT_GRID)),
        n_states=pick(args.n_states, "n_states", DEFAULT_N_STATES),
        seed=pick(args.seed, "seed", _default_seed()),
        mode=pick(args.mode, "mode", "stratified"),
        paired=not args.unpaired,
        identity_prep=args.identity_prep,
    )


def cmd_experiment(args: argparse.Namespace) -> int:
    try:
        config = _merge_experiment_config(args)
        config.validate()
    except (InvalidParameterError, OutOfRangeError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CHECK_FAILURE
    records = run_sweep(config)
    try:
        write_csv(records, args.out)
    except OSError as exc:
        print(f"error: {args.out}: {exc}", file=sys.stderr)
        return CHECK_FAILURE
    print(f"wrote {len(records)} records to {args.out}")
    print(f"{'f':>6} {'k':>14} {'shots':>6} {'avg_error':>14} {'std_error':>14}")
    for r in records:
        print(f"{r.f:>6g} {_fmt(r.k):>14} {r.shots:>6} {_fmt(r.avg_error):>14} {_fmt(r.std_error):>14}")
    return 0


def cmd_plot(args: argparse.Namespace) -> int:
    try:
        records = read_csv(args.infile)
    except CsvFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if not records:
        print("error: CSV contains no records", file=sys.stderr)
        return USAGE_ERROR
    try:
        render_svg(records, args.out)
    except OSError as exc:
        print(f"error: {args.out}: {exc}", file=sys.stderr)
        return CHECK_FAILURE
    print(f"wrote {args.out}")
    if args.check:
        failures = check_records(records)
        for message in failures:
            print(f"check failed: {message}", file=sys.stderr)
        if failures:
            return CHECK_FAILURE
        print("all checks passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nmecut",
        description="Wire cutting with partially entangled resource states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("overhead", help="print the optimal sampling overhead")
    p.add_argument("--k", type=float, help="entanglement parameter k >= 0")
    p.add_argument("--f", type=float, help="overlap f in [0.5, 1]")
    p.set_defaults(func=cmd_overhead)

    p = sub.add_parser("decompose", help="print the wire-cut decomposition for k")
    p.add_argument("--k", type=float, required=True, help="entanglement parameter k >= 0")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="check identity reconstruction of the decompositions")
    p.add_argument("--k", type=float, help="single k value to verify")
    p.add_argument("--all", action="store_true", help="verify k in {0, 0.1, ..., 1.0} plus the entanglement-free cut")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="run the shot-budget sweep and write CSV")
    p.add_argument("--f", type=float, nargs="+", help=f"overlap values (default {list(DEFAULT_F_VALUES)})")
    p.add_argument("--shots", type=int, nargs="+", help="shot budgets (default 250..5000 step 250)")
    p.add_argument("--n-states", type=int, help=f"random states per cell (default {DEFAULT_N_STATES})")
    p.add_argument(
        "--seed",
        type=int,
        help=f"random seed (default ${SEED_ENV_VAR} if set, else {DEFAULT_SEED})",
    )
    p.add_argument("--mode", choices=("stratified", "multinomial"), help="sampling mode (default stratified)")
    p.add_argument("--unpaired", action="store_true", help="draw independent W sequences per f value")
    p.add_argument("--identity-prep", action="store_true", help="test hook: use W = I for every state")
    p.add_argument("--config", help="JSON config file; explicit flags override file values")
    p.add_argument("--out", default="experiment.csv", help="output CSV path")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("plot", help="render a sweep CSV as an SVG chart")
    p.add_argument("--in", dest="infile", required=True, help="input CSV path")
    p.add_argument("--out", required=True, help="output SVG path")
    p.add_argument("--assert", dest="check", action="store_true", help="fail unless slope and ordering checks pass")
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NmecutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CHECK_FAILURE


if __name__ == "__main__":
    sys.exit(main())
