"""Per-run metrics, seed aggregation and CSV / JSON / plot-data export.

CSV layout (schema version 1): a header row, one row per (group, seed), then
one aggregate row per group whose ``seed`` cell is ``mean``. Aggregate rows
carry sample standard deviations in the ``*_std`` columns, which are empty on
per-seed rows. Empty cells also mark not-applicable values (for example the
throughput of a run that generated no packets).

JSON layout::

    {"schema_version": 1,
     "groups": [{"label": ..., "per_seed": [row, ...],
                 "aggregate": {metric: {"mean": x, "std": s}, ...}}, ...]}

Plot data is tab-separated with the header ``group metric mean std`` and one
line per (group, metric) for packet loss, total energy and throughput.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .engine import Outcome
from .sleep_control import energy_efficiency

REPORT_SCHEMA_VERSION = 1

SCALAR_METRICS = (
    "generated_packets",
    "delivered_packets",
    "dropped_packets",
    "dropped_queue_full",
    "dropped_no_attachment",
    "dropped_sbs_slept",
    "undelivered_at_end",
    "packet_loss_pct",
    "throughput_pct",
    "throughput_bps",
    "offered_bps",
    "energy_total_j",
    "energy_avg_per_sbs_j",
    "ee_bits_per_joule",
)

PLOT_METRICS = ("packet_loss_pct", "energy_total_j", "throughput_pct")


class ReportError(Exception):
    pass


@dataclass
class RunRow:
    strategy: str
    seed: int
    generated_packets: int
    delivered_packets: int
    dropped_packets: int
    dropped_queue_full: int
    dropped_no_attachment: int
    dropped_sbs_slept: int
    undelivered_at_end: int
    packet_loss_pct: float
    throughput_pct: float | None
    throughput_bps: float
    offered_bps: float
    energy_total_j: float
    energy_avg_per_sbs_j: float
    ee_bits_per_joule: float | None
    energy_per_sbs_j: dict = field(default_factory=dict)
    ee_per_sbs_bits_per_joule: dict = field(default_factory=dict)


def compute_report(trace) -> RunRow:
    counts = {o: 0 for o in Outcome}
    offered_bits = 0
    for r in trace.records:
        if r.outcome is None:
            raise ReportError(f"packet {r.pid} has no outcome")
        counts[r.outcome] += 1
        offered_bits += r.size_bytes * 8
    generated = len(trace.records)
    delivered = counts[Outcome.DELIVERED]
    dropped = generated - delivered
    if generated:
        loss = 100.0 * dropped / generated
        thr = 100.0 * delivered / generated
    else:
        loss, thr = 0.0, None
    window_s = (trace.tx_stop_us - trace.tx_start_us) / 1e6
    delivered_bits = sum(trace.delivered_bits_per_sbs.values())
    per_sbs = dict(sorted(trace.energy.per_sbs_j.items()))
    total_j = trace.energy.total_j
    ee_sbs = {
        sid: (energy_efficiency(trace.delivered_bits_per_sbs.get(sid, 0), e) if e > 0 else None)
        for sid, e in per_sbs.items()
    }
    return RunRow(
        strategy=trace.strategy,
        seed=trace.seed,
        generated_packets=generated,
        delivered_packets=delivered,
        dropped_packets=dropped,
        dropped_queue_full=counts[Outcome.DROPPED_QUEUE_FULL],
        dropped_no_attachment=counts[Outcome.DROPPED_NO_ATTACHMENT],
        dropped_sbs_slept=counts[Outcome.DROPPED_SBS_SLEPT],
        undelivered_at_end=counts[Outcome.UNDELIVERED_AT_END],
        packet_loss_pct=loss,
        throughput_pct=thr,
        throughput_bps=delivered_bits / window_s,
        offered_bps=offered_bits / window_s,
        energy_total_j=total_j,
        energy_avg_per_sbs_j=(sum(per_sbs.values()) / len(per_sbs)) if per_sbs else 0.0,
        ee_bits_per_joule=energy_efficiency(delivered_bits, total_j) if total_j > 0 else None,
        energy_per_sbs_j=per_sbs,
        ee_per_sbs_bits_per_joule=ee_sbs,
    )


@dataclass
class MetricsReport:
    label: str
    per_seed: list
    aggregate: dict      # metric -> {"mean": float | None, "std": float | None}

    def mean(self, metric: str):
        return self.aggregate[metric]["mean"]

    def std(self, metric: str):
        return self.aggregate[metric]["std"]


def _row_values(row: RunRow) -> dict:
    vals = {m: getattr(row, m) for m in SCALAR_METRICS}
    for sid, e in row.energy_per_sbs_j.items():
        vals[f"energy_sbs{sid}_j"] = e
    return vals


def aggregate_runs(rows, label: str | None = None) -> MetricsReport:
    """Mean and sample standard deviation of every metric across `rows`."""
    rows = list(rows)
    if not rows:
        raise ReportError("cannot aggregate zero runs")
    table = [_row_values(r) for r in rows]
    keys = list(table[0])
    agg = {}
    for k in keys:
        xs = [t.get(k) for t in table]
        xs = [x for x in xs if x is not None]
        if not xs:
            agg[k] = {"mean": None, "std": None}
            continue
        arr = np.asarray(xs, dtype=float)
        agg[k] = {
            "mean": float(arr.mean()),
            "std": float(arr.std(ddof=1)) if len(arr) > 1 else 0.0,
        }
    return MetricsReport(label=label or rows[0].strategy, per_seed=rows, aggregate=agg)


# --- export ---------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _columns(reports) -> list[str]:
    cols = list(SCALAR_METRICS)
    extra = []
    for rep in reports:
        for row in rep.per_seed:
            for sid in row.energy_per_sbs_j:
                c = f"energy_sbs{sid}_j"
                if c not in extra:
                    extra.append(c)
    cols += extra
    return cols


def report_csv(reports) -> str:
    reports = _as_list(reports)
    cols = _columns(reports)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["group", "seed"] + cols + [f"{c}_std" for c in cols])
    for rep in reports:
        for row in rep.per_seed:
            vals = _row_values(row)
            w.writerow([rep.label, row.seed] + [_fmt(vals.get(c)) for c in cols] + [""] * len(cols))
    for rep in reports:
        w.writerow([rep.label, "mean"]
                   + [_fmt(rep.aggregate.get(c, {}).get("mean")) for c in cols]
                   + [_fmt(rep.aggregate.get(c, {}).get("std")) for c in cols])
    return buf.getvalue()


def parse_report_csv(text: str) -> dict:
    """Inverse of :func:`report_csv`: ``{group: {"per_seed": {seed: {col: value}}, "mean": ..., "std": ...}}``."""
    rd = csv.reader(io.StringIO(text))
    header = next(rd)
    cols = header[2:]
    n = len(cols) // 2
    out = {}

    def conv(s):
        if s == "":
            return None
        try:
            return int(s)
        except ValueError:
            return float(s)

    for rec in rd:
        g = out.setdefault(rec[0], {"per_seed": {}, "mean": {}, "std": {}})
        vals = [conv(x) for x in rec[2:]]
        if rec[1] == "mean":
            g["mean"] = dict(zip(cols[:n], vals[:n]))
            g["std"] = {c[:-4]: v for c, v in zip(cols[n:], vals[n:])}
        else:
            g["per_seed"][int(rec[1])] = dict(zip(cols[:n], vals[:n]))
    return out


def report_json(reports) -> str:
    reports = _as_list(reports)
    doc = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "groups": [
            {"label": r.label, "per_seed": [asdict(row) for row in r.per_seed], "aggregate": r.aggregate}
            for r in reports
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def plot_data(reports) -> str:
    lines = ["group\tmetric\tmean\tstd"]
    for rep in _as_list(reports):
        for m in PLOT_METRICS:
            a = rep.aggregate[m]
            lines.append(f"{rep.label}\t{m}\t{_fmt(a['mean'])}\t{_fmt(a['std'])}")
    return "\n".join(lines) + "\n"


def _as_list(reports):
    if isinstance(reports, MetricsReport):
        return [reports]
    return list(reports)


def write_atomic(path: Path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def export_report(reports, fmt: str, destination, stem: str = "report") -> list[Path]:
    """Write `reports` into directory `destination`; return the paths written.

    `fmt` is ``csv``, ``json`` or ``both``. A ``<stem>_plot.tsv`` file is
    always written next to the report.
    """
    if fmt not in ("csv", "json", "both"):
        raise ValueError(f"unknown format {fmt!r}")
    dest = Path(destination)
    written = []
    try:
        if fmt in ("csv", "both"):
            p = dest / f"{stem}.csv"
            write_atomic(p, report_csv(reports))
            written.append(p)
        if fmt in ("json", "both"):
            p = dest / f"{stem}.json"
            write_atomic(p, report_json(reports))
            written.append(p)
        p = dest / f"{stem}_plot.tsv"
        write_atomic(p, plot_data(reports))
        written.append(p)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write report: {exc.strerror}", str(exc.filename or dest)) from exc
    return written


