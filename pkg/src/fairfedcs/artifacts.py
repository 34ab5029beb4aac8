"""File outputs for runs and sweeps: trace.csv, rounds.csv, summary.json.

All writers are byte-stable: floats are rendered with Python's shortest
round-trip repr, missing values as empty cells, rows in a fixed order,
and newlines fixed to \\n. Running the same config twice yields
byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .experiment import ExperimentTrace
from .metrics import MetricsReport
from .reputation import ReputationRecord, reputation_value

TRACE_COLUMNS = ("round", "client_id", "selected", "reputation", "a", "b", "q", "csi", "phi", "c", "x")
ROUNDS_COLUMNS = ("round", "test_accuracy", "test_loss", "utility", "lyapunov")
SWEEP_COLUMNS = (
    "policy",
    "seed",
    "jfi",
    "final_accuracy",
    "rounds_executed",
    "jfi_std",
    "final_accuracy_std",
    "rounds_executed_std",
)


def format_cell(value) -> str:
    """Render one CSV cell; None and NaN become the empty sentinel."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return ""
    return repr(value)


def write_csv(path: Path, header: tuple[str, ...], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])


def write_trace_csv(trace: ExperimentTrace, path: str | Path, full_trace: bool = False) -> None:
    """Per-round per-client state dump plus an end-of-run snapshot.

    By default a round emits rows for every client under queue-bearing
    policies (their queues move every round) and only the selected
    clients otherwise; ``full_trace`` forces all clients every round.
    The snapshot rows carry the post-final-round counters and queues
    with outcome columns empty.
    """
    n = trace.config.n_clients
    rows = []
    for rec in trace.records:
        x = np.zeros(n, dtype=np.int64)
        x[rec.selected] = 1
        ids = range(n) if (full_trace or rec.queues is not None) else rec.selected
        for i in ids:
            i = int(i)
            rows.append(
                (
                    rec.round_index,
                    i,
                    int(x[i]),
                    rec.reputation[i],
                    rec.positive[i],
                    rec.negative[i],
                    None if rec.queues is None else rec.queues[i],
                    None if rec.csi is None else rec.csi[i],
                    rec.phi[i],
                    None if rec.credits is None else rec.credits[i],
                    int(x[i]),
                )
            )
    for i in range(n):
        final_rep = reputation_value(
            ReputationRecord(i, int(trace.final_positive[i]), int(trace.final_negative[i]))
        )
        rows.append(
            (
                trace.rounds_executed,
                i,
                None,
                final_rep,
                trace.final_positive[i],
                trace.final_negative[i],
                None if trace.final_queues is None else trace.final_queues[i],
                None,
                None,
                None,
                None,
            )
        )
    write_csv(Path(path), TRACE_COLUMNS, rows)


def write_rounds_csv(trace: ExperimentTrace, path: str | Path) -> None:
    """Per-round global metrics: accuracy, loss, utility, backlog potential."""
    rows = [
        (rec.round_index, rec.test_accuracy, rec.test_loss, rec.utility, rec.lyapunov)
        for rec in trace.records
    ]
    write_csv(Path(path), ROUNDS_COLUMNS, rows)


def summary_dict(trace: ExperimentTrace, report: MetricsReport) -> dict:
    """JSON-ready run summary: metrics report plus the resolved config."""
    return {
        "config": trace.config.to_dict(),
        "jfi": report.jfi,
        "final_accuracy": report.final_accuracy,
        "final_loss": trace.final_loss,
        "rounds_executed": report.rounds_executed,
        "participation": report.participation.tolist(),
        "stability": None if report.stability is None else report.stability.tolist(),
        "lyapunov_trace": (
            None if report.lyapunov_trace is None else report.lyapunov_trace.tolist()
        ),
        "minority_class_accuracy": trace.minority_class_accuracy,
    }


def write_summary_json(trace: ExperimentTrace, report: MetricsReport, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(summary_dict(trace, report), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_sweep_csv(cells: list[dict], path: str | Path) -> None:
    """Sweep aggregation: one row per (policy, seed) plus mean/std rows.

    Data rows leave the ``*_std`` columns empty; each policy then gets
    one aggregate row with seed = "mean" carrying means in the value
    columns and sample standard deviations (0 for a single seed) in the
    ``*_std`` columns.
    """
    cells = sorted(cells, key=lambda c: (c["policy"], c["seed"]))
    rows = [
        (c["policy"], c["seed"], c["jfi"], c["final_accuracy"], c["rounds_executed"], None, None, None)
        for c in cells
    ]
    policies = sorted({c["policy"] for c in cells})
    for policy in policies:
        group = [c for c in cells if c["policy"] == policy]
        cols = {
            name: np.array([c[name] for c in group], dtype=float)
            for name in ("jfi", "final_accuracy", "rounds_executed")
        }
        def _std(v: np.ndarray) -> float:
            return float(v.std(ddof=1)) if v.size > 1 else 0.0
        rows.append(
            (
                policy,
                "mean",
                float(cols["jfi"].mean()),
                float(cols["final_accuracy"].mean()),
                float(cols["rounds_executed"].mean()),
                _std(cols["jfi"]),
                _std(cols["final_accuracy"]),
                _std(cols["rounds_executed"]),
            )
        )
    write_csv(Path(path), SWEEP_COLUMNS, rows)


def read_sweep_csv(path: str | Path) -> tuple[list[dict], list[dict]]:
    """Load sweep rows back as (data_rows, aggregate_rows)."""
    data, aggregates = [], []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            parsed = {
                "policy": row["policy"],
                "jfi": float(row["jfi"]),
                "final_accuracy": float(row["final_accuracy"]),
                "rounds_executed": float(row["rounds_executed"]),
            }
            if row["seed"] == "mean":
                parsed.update(
                    jfi_std=float(row["jfi_std"]),
                    final_accuracy_std=float(row["final_accuracy_std"]),
                    rounds_executed_std=float(row["rounds_executed_std"]),
                )
                aggregates.append(parsed)
            else:
                parsed["seed"] = int(row["seed"])
                data.append(parsed)
    return data, aggregates
