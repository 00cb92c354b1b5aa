"""Multi-seed and multi-strategy drivers shared by the CLI and the demos."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

from .engine import run_simulation
from .metrics import aggregate_runs, compute_report
from .scenario import apply_sweep
from .sleep_control import Strategy


def _one(args):
    scenario, strategy, seed, trace = args
    tr = run_simulation(scenario, strategy, seed, trace=trace)
    return compute_report(tr), tr if trace else None


def run_seeds(scenario, strategy, seeds=None, jobs: int = 1, trace: bool = False):
    """Run `strategy` once per seed; return ``(rows, traces)`` in seed order.

    `traces` holds RunTrace objects only when `trace` is set, else ``None``s.
    Independent runs may be spread over `jobs` worker processes; results are
    identical to a serial run.
    """
    seeds = list(scenario.seeds if seeds is None else seeds)
    work = [(scenario, strategy, s, trace) for s in seeds]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            out = list(pool.map(_one, work))
    else:
        out = [_one(w) for w in work]
    return [o[0] for o in out], [o[1] for o in out]


def compare_strategies(scenario, strategies, seeds=None, jobs: int = 1):
    """Paired comparison: every strategy sees the same seeds and traffic."""
    reports = []
    for strat in strategies:
        rows, _ = run_seeds(scenario, strat, seeds, jobs)
        reports.append(aggregate_runs(rows, label=Strategy.from_name(strat).value))
    return reports


def sweep(scenario, axis, values, strategy, seeds=None, jobs: int = 1):
    reports = []
    for v in values:
        sc = apply_sweep(scenario, axis, v)
        rows, _ = run_seeds(sc, strategy, seeds, jobs)
        reports.append(aggregate_runs(rows, label=f"{axis}={v}"))
    return reports
