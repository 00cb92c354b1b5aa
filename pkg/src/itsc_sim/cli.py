"""Command-line entry point: ``itsc-sim run | compare | sweep | validate``.

Exit codes: 0 success, 1 usage error, 2 configuration error, 3 runtime or
I/O error. The default output directory is ``$ITSC_SIM_OUT`` or ``results``.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import experiment
from .metrics import aggregate_runs, export_report, write_atomic
from .scenario import (
    STRATEGY_NAMES,
    SWEEP_AXES,
    ScenarioError,
    load_scenario,
    paper_default_scenario,
    stress_scenario,
)

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3
OUT_ENV = "ITSC_SIM_OUT"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _seed_list(text: str) -> list[int]:
    try:
        seeds = [int(t) for t in _csv_list(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"seeds must be integers: {text!r}") from None
    if not seeds or any(s < 0 for s in seeds):
        raise argparse.ArgumentTypeError("need at least one non-negative seed")
    return seeds


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="itsc-sim", description="Small-cell sleep control and priority bandwidth simulator.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, need_strategy=True):
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--scenario", metavar="PATH", help="scenario config file")
        src.add_argument("--paper-default", action="store_true", help="built-in 5-SBS / 10-UE scenario")
        src.add_argument("--stress", action="store_true",
                         help="paper-default layout with 60 Mbit/s per SBS (oversubscribed)")
        sp.add_argument("--seeds", type=_seed_list, metavar="N1,N2,...", help="override the scenario seeds")
        sp.add_argument("--out", metavar="DIR", default=None,
                        help=f"output directory (default ${OUT_ENV} or ./results)")
        sp.add_argument("--format", choices=("csv", "json", "both"), default="both")
        sp.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes")
        if need_strategy:
            sp.add_argument("--strategy", choices=STRATEGY_NAMES, default=None,
                            help="itsc, eer-proxy or nr-proxy (default: scenario key, else itsc)")

    r = sub.add_parser("run", help="run one strategy over all seeds")
    common(r)
    r.add_argument("--trace", action="store_true", help="also write one event log per seed")

    c = sub.add_parser("compare", help="paired comparison of two or more strategies")
    common(c, need_strategy=False)
    c.add_argument("--strategies", type=_csv_list, required=True, metavar="A,B,C")

    s = sub.add_parser("sweep", help="repeat a run for each value of one parameter")
    common(s)
    s.add_argument("--sweep", required=True, metavar="KEY", help=f"one of: {', '.join(SWEEP_AXES)}")
    s.add_argument("--values", type=_csv_list, required=True, metavar="V1,V2,...")

    v = sub.add_parser("validate", help="check a scenario file and print a summary")
    src = v.add_mutually_exclusive_group(required=True)
    src.add_argument("--scenario", metavar="PATH")
    src.add_argument("--paper-default", action="store_true")
    src.add_argument("--stress", action="store_true")
    return p


def _scenario(args):
    if getattr(args, "paper_default", False):
        return paper_default_scenario()
    if getattr(args, "stress", False):
        return stress_scenario()
    path = Path(args.scenario)
    try:
        return load_scenario(path)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc.strerror}") from None


def _out_dir(args) -> Path:
    return Path(args.out or os.environ.get(OUT_ENV) or "results")


def _strategy(args, sc):
    return args.strategy or sc.strategy or "itsc"


def _summary(rep) -> str:
    def f(m, unit=""):
        mean, std = rep.mean(m), rep.std(m)
        if mean is None:
            return f"{m}=n/a"
        return f"{m}={mean:.4g}{unit} (sd {std:.3g})"
    return "  ".join([rep.label.ljust(12), f("packet_loss_pct", "%"), f("throughput_pct", "%"),
                      f("energy_total_j", " J")])


def cmd_run(args) -> int:
    sc = _scenario(args)
    strat = _strategy(args, sc)
    seeds = args.seeds or list(sc.seeds)
    rows, traces = experiment.run_seeds(sc, strat, seeds, args.jobs, trace=args.trace)
    rep = aggregate_runs(rows, label=strat)
    out = _out_dir(args)
    export_report(rep, args.format, out, stem=f"run_{strat}")
    if args.trace:
        for tr in traces:
            write_atomic(out / f"trace_{strat}_seed{tr.seed}.log", tr.dump_log())
    print(_summary(rep))
    print(f"wrote reports to {out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    names = args.strategies
    if len(names) < 2:
        raise UsageError("compare needs at least two strategies")
    for n in names:
        if n not in STRATEGY_NAMES:
            raise UsageError(f"unknown strategy {n!r}; expected one of {', '.join(STRATEGY_NAMES)}")
    sc = _scenario(args)
    reps = experiment.compare_strategies(sc, names, args.seeds or list(sc.seeds), args.jobs)
    out = _out_dir(args)
    export_report(reps, args.format, out, stem="compare")
    for rep in reps:
        print(_summary(rep))
    print(f"wrote reports to {out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.sweep not in SWEEP_AXES:
        raise UsageError(f"unknown sweep axis {args.sweep!r}; valid axes: {', '.join(SWEEP_AXES)}")
    if not args.values:
        raise UsageError("--values needs at least one value")
    sc = _scenario(args)
    strat = _strategy(args, sc)
    try:
        reps = experiment.sweep(sc, args.sweep, args.values, strat, args.seeds or list(sc.seeds), args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = _out_dir(args)
    export_report(reps, args.format, out, stem=f"sweep_{args.sweep}")
    for rep in reps:
        print(_summary(rep))
    print(f"wrote reports to {out}")
    return EXIT_OK


def cmd_validate(args) -> int:
    sc = _scenario(args)
    print(f"{sc.name}: {len(sc.sbs_list)} SBSs, {len(sc.ue_list)} UEs, {len(sc.flows)} flows, "
          f"{sc.sim_end_s - sc.sim_start_s:g} s, {len(sc.seeds)} seeds - OK")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "compare": cmd_compare, "sweep": cmd_sweep, "validate": cmd_validate}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"itsc-sim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ScenarioError as exc:
        print(f"itsc-sim: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"itsc-sim: I/O error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - any simulation failure maps to exit 3
        print(f"itsc-sim: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
