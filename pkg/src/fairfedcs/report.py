"""Sweep reports: comparison table, plot-data CSVs, and an SVG chart.

Reads the directory layout produced by a sweep (sweep.csv plus one
<policy>/seed_<n>/ cell directory per run) and emits:

* table.txt - policies as rows, mean JFI and final accuracy as columns,
  one column pair per scenario present in the sweep;
* accuracy_curves.csv - per-policy mean test accuracy by round, with
  shorter runs padded at their final value before averaging;
* participation_hist.csv - per-policy selection counts per client,
  summed over seeds;
* queue_heatmap.csv - per-policy mean queue length by (round, client)
  for the queue-bearing policies;
* accuracy_curves.svg - a static rendering of the accuracy curves.

The SVG is assembled by hand so regenerating a report is byte-stable.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .artifacts import read_sweep_csv, write_csv
from .config import POLICIES

_COLORS = {
    "fairfedcs": "#1f77b4",
    "random": "#ff7f0e",
    "greedy": "#2ca02c",
    "rbcsf": "#d62728",
    "rbff_proxy": "#9467bd",
    "ablation": "#8c564b",
}


def cell_dir(sweep_dir: Path, policy: str, seed: int) -> Path:
    return Path(sweep_dir) / policy / f"seed_{seed}"


def _ordered_policies(present: set[str]) -> list[str]:
    return [p for p in POLICIES if p in present]


def _load_summaries(sweep_dir: Path) -> list[dict]:
    data_rows, _ = read_sweep_csv(Path(sweep_dir) / "sweep.csv")
    summaries = []
    for row in data_rows:
        path = cell_dir(sweep_dir, row["policy"], row["seed"]) / "summary.json"
        with open(path) as fh:
            summary = json.load(fh)
        summary["_policy"] = row["policy"]
        summary["_seed"] = row["seed"]
        summaries.append(summary)
    return summaries


def _load_accuracy_series(sweep_dir: Path, policy: str, seed: int) -> list[float]:
    path = cell_dir(sweep_dir, policy, seed) / "rounds.csv"
    with open(path, newline="") as fh:
        return [float(row["test_accuracy"]) for row in csv.DictReader(fh)]


def _load_queue_rows(sweep_dir: Path, policy: str, seed: int) -> list[tuple[int, int, float]]:
    """(round, client_id, q) for every live round; snapshot rows excluded."""
    path = cell_dir(sweep_dir, policy, seed) / "trace.csv"
    rows = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row["q"] == "" or row["x"] == "":
                continue
            rows.append((int(row["round"]), int(row["client_id"]), float(row["q"])))
    return rows


def _mean_accuracy_curves(sweep_dir: Path, summaries: list[dict]) -> dict[str, np.ndarray]:
    curves = {}
    for policy in _ordered_policies({s["_policy"] for s in summaries}):
        series = [
            _load_accuracy_series(sweep_dir, s["_policy"], s["_seed"])
            for s in summaries
            if s["_policy"] == policy
        ]
        width = max(len(s) for s in series)
        padded = np.array([s + [s[-1]] * (width - len(s)) for s in series])
        curves[policy] = padded.mean(axis=0)
    return curves


def _write_table(summaries: list[dict], path: Path) -> None:
    scenarios = sorted({s["config"]["scenario"] for s in summaries})
    policies = _ordered_policies({s["_policy"] for s in summaries})
    header = ["policy"]
    for sc in scenarios:
        header += [f"JFI (S{sc})", f"Acc (S{sc})"]
    lines = [header]
    for policy in policies:
        line = [policy]
        for sc in scenarios:
            group = [
                s for s in summaries if s["_policy"] == policy and s["config"]["scenario"] == sc
            ]
            if group:
                line.append(f"{np.mean([s['jfi'] for s in group]):.3f}")
                line.append(f"{np.mean([s['final_accuracy'] for s in group]):.3f}")
            else:
                line += ["-", "-"]
        lines.append(line)
    widths = [max(len(row[j]) for row in lines) for j in range(len(header))]
    rendered = [
        "  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)).rstrip() for row in lines
    ]
    Path(path).write_text("\n".join(rendered) + "\n")


def render_accuracy_svg(curves: dict[str, np.ndarray]) -> str:
    """Line chart of mean accuracy by round, one polyline per policy."""
    width, height = 640.0, 400.0
    left, right, top, bottom = 60.0, 630.0, 20.0, 355.0
    max_round = max(len(c) for c in curves.values()) - 1
    x_hi = max(max_round, 1)
    y_lo = min(float(c.min()) for c in curves.values())
    y_hi = max(float(c.max()) for c in curves.values())
    pad = max(0.01, 0.05 * (y_hi - y_lo))
    y_lo, y_hi = max(0.0, y_lo - pad), min(1.0, y_hi + pad)

    def sx(r: float) -> float:
        return left + (right - left) * r / x_hi

    def sy(v: float) -> float:
        return bottom - (bottom - top) * (v - y_lo) / (y_hi - y_lo)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:g} {height:g}" '
        f'font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width:g}" height="{height:g}" fill="white"/>',
        f'<line x1="{left:.1f}" y1="{bottom:.1f}" x2="{right:.1f}" y2="{bottom:.1f}" stroke="black"/>',
        f'<line x1="{left:.1f}" y1="{top:.1f}" x2="{left:.1f}" y2="{bottom:.1f}" stroke="black"/>',
    ]
    for k in range(5):
        r = x_hi * k / 4
        x = sx(r)
        parts.append(f'<line x1="{x:.1f}" y1="{bottom:.1f}" x2="{x:.1f}" y2="{bottom + 4:.1f}" stroke="black"/>')
        parts.append(f'<text x="{x:.1f}" y="{bottom + 18:.1f}" text-anchor="middle">{r:.0f}</text>')
    for k in range(5):
        v = y_lo + (y_hi - y_lo) * k / 4
        y = sy(v)
        parts.append(f'<line x1="{left - 4:.1f}" y1="{y:.1f}" x2="{left:.1f}" y2="{y:.1f}" stroke="black"/>')
        parts.append(f'<text x="{left - 8:.1f}" y="{y + 4:.1f}" text-anchor="end">{v:.2f}</text>')
    parts.append(
        f'<text x="{(left + right) / 2:.1f}" y="{height - 8:.1f}" text-anchor="middle">round</text>'
    )
    parts.append(
        f'<text x="14" y="{(top + bottom) / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 14 {(top + bottom) / 2:.1f})">test accuracy</text>'
    )
    for idx, (policy, curve) in enumerate(curves.items()):
        color = _COLORS.get(policy, "#333333")
        points = " ".join(f"{sx(r):.1f},{sy(v):.1f}" for r, v in enumerate(curve))
        parts.append(f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = top + 16 * idx
        parts.append(
            f'<line x1="{right - 130:.1f}" y1="{ly + 4:.1f}" x2="{right - 110:.1f}" y2="{ly + 4:.1f}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(f'<text x="{right - 104:.1f}" y="{ly + 8:.1f}">{policy}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def build_report(sweep_dir: str | Path, out_dir: str | Path) -> list[Path]:
    """Generate all report files from a completed sweep; returns the paths."""
    sweep_dir = Path(sweep_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summaries = _load_summaries(sweep_dir)
    if not summaries:
        raise FileNotFoundError(f"no run summaries found under {sweep_dir}")
    written = []

    table_path = out_dir / "table.txt"
    _write_table(summaries, table_path)
    written.append(table_path)

    curves = _mean_accuracy_curves(sweep_dir, summaries)
    curve_rows = [
        (r, policy, value)
        for policy, curve in curves.items()
        for r, value in enumerate(curve)
    ]
    curves_path = out_dir / "accuracy_curves.csv"
    write_csv(curves_path, ("round", "policy", "mean_accuracy"), curve_rows)
    written.append(curves_path)

    hist_rows = []
    for policy in _ordered_policies({s["_policy"] for s in summaries}):
        group = [s for s in summaries if s["_policy"] == policy]
        counts = np.sum([s["participation"] for s in group], axis=0)
        hist_rows += [(policy, i, int(c)) for i, c in enumerate(counts)]
    hist_path = out_dir / "participation_hist.csv"
    write_csv(hist_path, ("policy", "client_id", "count"), hist_rows)
    written.append(hist_path)

    heatmap_rows = []
    for policy in _ordered_policies({s["_policy"] for s in summaries}):
        group = [s for s in summaries if s["_policy"] == policy]
        if group[0]["stability"] is None:
            continue
        totals: dict[tuple[int, int], list[float]] = {}
        for s in group:
            for r, i, q in _load_queue_rows(sweep_dir, s["_policy"], s["_seed"]):
                totals.setdefault((r, i), []).append(q)
        heatmap_rows += [
            (policy, r, i, float(np.mean(qs))) for (r, i), qs in sorted(totals.items())
        ]
    heatmap_path = out_dir / "queue_heatmap.csv"
    write_csv(heatmap_path, ("policy", "round", "client_id", "q"), heatmap_rows)
    written.append(heatmap_path)

    svg_path = out_dir / "accuracy_curves.svg"
    svg_path.write_text(render_accuracy_svg(curves))
    written.append(svg_path)
    return written
