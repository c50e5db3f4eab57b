"""Batch command line: ``simulate``, ``check``, ``witness`` and ``example``.

Exit codes: ``check`` returns 0 / 2 / 3 for HOLDS / FAILS / INCONCLUSIVE,
``witness`` returns 0 when a finite N was found and 2 otherwise, and any
load or validation problem exits with 1.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys

from .conditions import FAILS, HOLDS, check_corollary, fmt
from .dynamics import cosine
from .measure import total_variation
from .scenarios import (ExampleParams, ParseError, RunConfig, ValidationError,
                        build_example, dumps_system, load_run_config)
from .witness import BallSpec, scan_witnesses

EXIT_OK, EXIT_ERROR, EXIT_FAILS, EXIT_INCONCLUSIVE = 0, 1, 2, 3


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="run-configuration JSON; flags override it")
    p.add_argument("--system", help="system JSON file")
    p.add_argument("--measure", action="append", dest="measures", metavar="PATH",
                   help="measure JSON file (repeatable)")
    p.add_argument("--window", nargs=2, type=float, metavar=("LO", "HI"))
    p.add_argument("--horizon", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--radius", type=float)
    p.add_argument("--case", choices=["d-equals-k", "e-equals-k"])
    p.add_argument("--grid-step", type=float, dest="grid_step")
    p.add_argument("--out", help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cosine-dynamics",
                                     description="Adjoint cosine dynamics on atomic measures.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("simulate", "iterate C_n* on a measure and tabulate it"),
                        ("check", "check the three limit conditions on a window"),
                        ("witness", "scan witnesses for n = 1..horizon")):
        _common(sub.add_parser(name, help=help_))
    ex = sub.add_parser("example", help="write the piecewise example system")
    ex.add_argument("--M", type=float, default=4.0)
    ex.add_argument("--delta", type=float, default=1.0)
    ex.add_argument("--out", help="output path (default: stdout)")
    return parser


def _config(args) -> RunConfig:
    cfg = load_run_config(args.config) if args.config else RunConfig()
    for name in ("horizon", "tol", "radius", "case", "grid_step", "out"):
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, name, value)
    if args.window is not None:
        cfg.window = tuple(args.window)
    # flag paths are relative to the working directory, config paths to the config file
    if args.system is not None:
        cfg.system = os.path.abspath(args.system)
    if args.measures:
        cfg.measures = [os.path.abspath(p) for p in args.measures]
    cfg.validate()
    return cfg


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_simulate(cfg: RunConfig) -> int:
    system = cfg.load_system()
    measures = cfg.load_measures()
    if not measures:
        raise ValidationError("measures", "simulate needs one --measure")
    m = measures[0]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "tv_norm", "atom_count", "min_position", "max_position"])
    for n in range(1, cfg.horizon + 1):
        c = cosine(system, m, n)
        lo = c.positions[0] if c else float("nan")
        hi = c.positions[-1] if c else float("nan")
        writer.writerow([n, fmt(total_variation(c)), len(c), fmt(lo), fmt(hi)])
    _emit(buf.getvalue(), cfg.out)
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    system = cfg.load_system()
    report = check_corollary(system, cfg.compact_window, cfg.horizon, cfg.tol, cfg.grid_step)
    text = report.to_csv() if (cfg.out or "").endswith(".csv") else report.to_json()
    _emit(text, cfg.out)
    print(f"overall: {report.overall} {report.verdicts}", file=sys.stderr)
    return {HOLDS: EXIT_OK, FAILS: EXIT_FAILS}.get(report.overall, EXIT_INCONCLUSIVE)


def cmd_witness(cfg: RunConfig) -> int:
    system = cfg.load_system()
    measures = cfg.load_measures()
    if len(measures) != 2:
        raise ValidationError("measures", "witness needs exactly two --measure files (mu, nu)")
    mu, nu = measures
    result = scan_witnesses(system, mu, nu, cfg.compact_window, BallSpec(mu, cfg.radius),
                            BallSpec(nu, cfg.radius), cfg.horizon, cfg.case)
    _emit(result.to_csv(), cfg.out)
    print(f"N: {result.N if result.found else 'none within horizon'}", file=sys.stderr)
    return EXIT_OK if result.found else EXIT_FAILS


def cmd_example(args) -> int:
    system = build_example(ExampleParams(args.M, args.delta))
    _emit(dumps_system(system), args.out)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "example":
            return cmd_example(args)
        cfg = _config(args)
        return {"simulate": cmd_simulate, "check": cmd_check,
                "witness": cmd_witness}[args.command](cfg)
    except (ParseError, ValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
