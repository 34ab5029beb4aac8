"""Request/response bodies for the HTTP service."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, ConfigDict

from ..config import ExperimentConfig, config_from_mapping


class ExperimentConfigModel(BaseModel):
    """Wire form of an experiment config; omitted keys take defaults."""

    model_config = ConfigDict(extra="forbid")

    scenario: int
    policy: str
    seed: int
    n_clients: int | None = None
    m: int | None = None
    sigma: float | None = None
    epsilon_override: float | None = None
    eta: float | None = None
    p_minority: float | None = None
    n_classes: int | None = None
    feature_dim: int | None = None
    samples_per_client: int | None = None
    lr: float | None = None
    epochs: int | None = None
    batch_size: int | None = None
    shapley_mode: str | None = None
    shapley_permutations: int | None = None
    truncation_tol: float | None = None
    max_rounds: int | None = None
    patience: int | None = None

    def to_config(self) -> ExperimentConfig:
        raw = {k: v for k, v in self.model_dump().items() if v is not None}
        return config_from_mapping(raw)


class RunRequest(BaseModel):
    config: ExperimentConfigModel
    out_dir: str
    full_trace: bool = False


class RunSummary(BaseModel):
    jfi: float
    final_accuracy: float
    final_loss: float
    rounds_executed: int
    participation: list[int]
    minority_class_accuracy: float | None = None


class RunResponse(BaseModel):
    out_dir: str
    files: list[str]
    summary: RunSummary


class SweepRequest(BaseModel):
    config: ExperimentConfigModel
    policies: list[str]
    seeds: list[int]
    out_dir: str


class CellResult(BaseModel):
    policy: str
    seed: int
    jfi: float
    final_accuracy: float
    rounds_executed: int
    dir: str


class SweepResponse(BaseModel):
    out_dir: str
    sweep_csv: str
    cells: list[CellResult]


class ReportRequest(BaseModel):
    sweep_dir: str
    out_dir: str


class ReportResponse(BaseModel):
    out_dir: str
    files: list[str]


class HealthResponse(BaseModel):
    status: str
    version: str


def summary_to_model(summary: dict[str, Any]) -> RunSummary:
    return RunSummary(
        jfi=summary["jfi"],
        final_accuracy=summary["final_accuracy"],
        final_loss=summary["final_loss"],
        rounds_executed=summary["rounds_executed"],
        participation=summary["participation"],
        minority_class_accuracy=summary["minority_class_accuracy"],
    )
