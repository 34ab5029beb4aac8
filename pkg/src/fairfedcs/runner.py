"""Run/sweep execution with artifact persistence.

The service endpoints and any direct library use both go through these
functions: execute one configured run into an output directory, or a
policies x seeds sweep into per-cell directories plus sweep.csv.
"""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

from .artifacts import (
    summary_dict,
    write_rounds_csv,
    write_summary_json,
    write_sweep_csv,
    write_trace_csv,
)
from .config import POLICIES, ConfigError, ExperimentConfig
from .experiment import generate_data, run_experiment
from .metrics import summarize
from .report import cell_dir

RUN_FILES = ("trace.csv", "rounds.csv", "summary.json")


def execute_run(
    config: ExperimentConfig,
    out_dir: str | Path,
    full_trace: bool = False,
    data=None,
) -> dict:
    """Run one experiment and write its three artifact files."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    trace = run_experiment(config, data=data)
    report = summarize(trace)
    write_trace_csv(trace, out_dir / "trace.csv", full_trace=full_trace)
    write_rounds_csv(trace, out_dir / "rounds.csv")
    write_summary_json(trace, report, out_dir / "summary.json")
    return {
        "out_dir": str(out_dir),
        "files": [str(out_dir / name) for name in RUN_FILES],
        "summary": summary_dict(trace, report),
    }


def execute_sweep(
    config: ExperimentConfig,
    policies: list[str],
    seeds: list[int],
    out_dir: str | Path,
) -> dict:
    """Run every (policy, seed) cell and aggregate into sweep.csv.

    Cell traces are always written in full so downstream reports can
    rebuild queue histories. Data generation is shared across policies
    for each seed (it depends only on the seed and scenario shape).
    """
    if not policies or not seeds:
        raise ConfigError("sweep needs at least one policy and one seed")
    unknown = sorted(set(policies) - set(POLICIES))
    if unknown:
        raise ConfigError(f"unknown policies: {', '.join(unknown)}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    cells = []
    for seed in seeds:
        data = generate_data(replace(config, seed=seed))
        for policy in policies:
            cell_config = replace(config, policy=policy, seed=seed)
            result = execute_run(
                cell_config, cell_dir(out_dir, policy, seed), full_trace=True, data=data
            )
            cells.append(
                {
                    "policy": policy,
                    "seed": seed,
                    "jfi": result["summary"]["jfi"],
                    "final_accuracy": result["summary"]["final_accuracy"],
                    "rounds_executed": result["summary"]["rounds_executed"],
                    "dir": result["out_dir"],
                }
            )
    sweep_csv = out_dir / "sweep.csv"
    write_sweep_csv(cells, sweep_csv)
    return {"out_dir": str(out_dir), "sweep_csv": str(sweep_csv), "cells": cells}
