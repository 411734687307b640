"""Command-line interface.

Subcommands:
  gen      generate a workload trace from a config's workload block
  replay   replay a trace in one mode and write a report
  compare  replay both modes and write a combined report
  oracle   utility solvers (currently ``oracle lsq``)

Exit codes: 0 success, 1 configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Optional, Sequence

from .config import load_config
from .errors import ConfigError
from .lsq_oracle import fit_observation_rows
from .replay import MODES, compare, replay
from .report import write_report
from .workload import generate_workload, load_trace, save_trace


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="costtuner",
        description="Adaptive cost-model experiments on a deterministic buffer/executor simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a workload trace")
    gen.add_argument("--config", required=True, help="experiment config JSON")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True, help="output trace file (JSON lines)")

    rep = sub.add_parser("replay", help="replay a trace in one mode")
    rep.add_argument("--trace", required=True)
    rep.add_argument("--mode", choices=MODES, required=True)
    rep.add_argument("--profile", required=True, help="experiment config JSON")
    rep.add_argument("--warmup", type=int, default=2,
                     help="extra replays before measurement (default 2)")
    rep.add_argument("--out", required=True, help="output report directory")

    cmp_parser = sub.add_parser("compare", help="replay both modes and diff the plans")
    cmp_parser.add_argument("--trace", required=True)
    cmp_parser.add_argument("--profile", required=True, help="experiment config JSON")
    cmp_parser.add_argument("--warmup", type=int, default=2)
    cmp_parser.add_argument("--out", required=True, help="output report directory")

    oracle = sub.add_parser("oracle", help="utility solvers")
    oracle_sub = oracle.add_subparsers(dest="oracle_command", required=True)
    lsq = oracle_sub.add_parser(
        "lsq", help="brute-force normal-equations fit over observation rows"
    )
    lsq.add_argument("--in", dest="input", required=True,
                     help="CSV with columns n_tuples,n_operations,n_index_entries,disk_cost,exec_time_ms")
    lsq.add_argument("--scale-factor", type=float, default=1.0)
    return parser


def _cmd_gen(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if config.workload is None:
        raise ConfigError(f"config {args.config!r} has no workload block")
    trace = generate_workload(config.workload, args.seed)
    save_trace(trace, args.out)
    print(f"wrote {len(trace)} queries to {args.out}")
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    config = load_config(args.profile)
    trace = load_trace(args.trace)
    result = replay(trace, args.mode, config, warmup=args.warmup)
    from .replay import RunReport  # local import keeps CLI startup cheap

    report = RunReport(
        baseline=result if args.mode == "baseline" else None,
        acm=result if args.mode == "acm" else None,
    )
    for path in write_report(report, args.out):
        print(path)
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    config = load_config(args.profile)
    trace = load_trace(args.trace)
    report = compare(trace, config, warmup=args.warmup)
    for path in write_report(report, args.out):
        print(path)
    if report.improvement is not None:
        print(f"improvement: {report.improvement * 100.0:.2f}%")
    print(f"plan flips: {len(report.plan_flips)}")
    return 0


def _cmd_oracle_lsq(args: argparse.Namespace) -> int:
    rows = []
    try:
        with open(args.input, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            required = {"n_tuples", "n_operations", "n_index_entries", "disk_cost", "exec_time_ms"}
            if reader.fieldnames is None or not required.issubset(reader.fieldnames):
                raise ConfigError(
                    f"{args.input!r} must have columns {sorted(required)}"
                )
            for record in reader:
                rows.append(
                    (
                        float(record["n_tuples"]),
                        float(record["n_operations"]),
                        float(record["n_index_entries"]),
                        float(record["disk_cost"]),
                        float(record["exec_time_ms"]),
                    )
                )
    except OSError as exc:
        raise ConfigError(f"cannot read {args.input!r}: {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"bad value in {args.input!r}: {exc}") from None
    if not rows:
        raise ConfigError(f"{args.input!r} contains no data rows")
    c_t, c_o, c_i = fit_observation_rows(rows, scale_factor=args.scale_factor)
    print("c_t,c_o,c_i")
    print(",".join("" if v is None else repr(v) for v in (c_t, c_o, c_i)))
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "replay":
            return _cmd_replay(args)
        if args.command == "compare":
            return _cmd_compare(args)
        if args.command == "oracle":
            return _cmd_oracle_lsq(args)
        parser.error(f"unknown command {args.command!r}")
        return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
