"""Fairness and performance metrics for experiment traces.

Participation fairness is Jain's index over quality-normalized
participation ratios: a client "deserves" selection in proportion to
its data quality (classes held times clean fraction), so the index is 1
when participation tracks quality exactly and 1/n when one client takes
everything.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .experiment import ExperimentTrace
from .simdata import ClientDataProfile

# Lowest scaled quality: keeps the worst client's ratio finite after
# min-max scaling sends the minimum to 0.
QUALITY_FLOOR = 0.05


@dataclass(frozen=True)
class QualityProfile:
    """Raw and rescaled per-client data quality."""

    raw: np.ndarray
    scaled: np.ndarray


@dataclass(frozen=True)
class MetricsReport:
    """Headline numbers for one run."""

    jfi: float
    final_accuracy: float
    rounds_executed: int
    participation: np.ndarray
    stability: np.ndarray | None
    lyapunov_trace: np.ndarray | None


def quality_profile(profiles: list[ClientDataProfile]) -> QualityProfile:
    """Quality = classes held x clean fraction, min-max scaled with a floor.

    A population with constant raw quality scales to all ones (the index
    then measures plain participation-count fairness).
    """
    raw = np.array([p.n_classes * (1.0 - p.noise_fraction) for p in profiles])
    lo, hi = raw.min(), raw.max()
    if hi == lo:
        scaled = np.ones_like(raw)
    else:
        scaled = np.maximum(QUALITY_FLOOR, (raw - lo) / (hi - lo))
    return QualityProfile(raw=raw, scaled=scaled)


def jain_fairness_index(participation: np.ndarray, quality: np.ndarray) -> float:
    """Jain's index over participation-per-quality ratios; in (0, 1].

    Equals 1 when all ratios match, 1/n when a single client holds all
    participation.
    """
    participation = np.asarray(participation, dtype=float)
    quality = np.asarray(quality, dtype=float)
    if np.any(quality <= 0):
        raise ValueError("all quality values must be > 0")
    if not np.any(participation > 0):
        raise ValueError("at least one client must have participated")
    ratios = participation / quality
    return float(ratios.sum() ** 2 / (ratios.size * np.dot(ratios, ratios)))


def stability_statistics(
    queue_trace: np.ndarray, c_trace: np.ndarray, x_trace: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-client queue drift rate and terminal backlog ratio.

    ``queue_trace`` holds Q(0)..Q(T) (T+1 rows); ``c_trace`` and
    ``x_trace`` hold the T per-round credits and participation
    indicators. Returns (mean of c - x over rounds, Q(T) / T); the
    latter vanishing as T grows is the mean-rate stability statistic.
    """
    queue_trace = np.asarray(queue_trace, dtype=float)
    c_trace = np.asarray(c_trace, dtype=float)
    x_trace = np.asarray(x_trace, dtype=float)
    T = c_trace.shape[0]
    if T == 0:
        raise ValueError("traces must cover at least one round")
    if x_trace.shape != c_trace.shape or queue_trace.shape[0] != T + 1:
        raise ValueError(
            f"shape mismatch: queues {queue_trace.shape}, credits {c_trace.shape}, "
            f"participation {x_trace.shape}"
        )
    mean_rate = (c_trace - x_trace).mean(axis=0)
    terminal_ratio = queue_trace[-1] / T
    return mean_rate, terminal_ratio


def participation_counts(trace: ExperimentTrace) -> np.ndarray:
    """Times each client was selected over the whole run."""
    counts = np.zeros(trace.config.n_clients, dtype=np.int64)
    for record in trace.records:
        counts[record.selected] += 1
    return counts


def summarize(trace: ExperimentTrace, qualities: QualityProfile | None = None) -> MetricsReport:
    """Assemble the per-run metrics report from a trace."""
    if not trace.records:
        raise ValueError("trace has no rounds")
    if qualities is None:
        qualities = quality_profile(trace.profiles)
    counts = participation_counts(trace)
    if trace.final_queues is not None:
        stability = trace.final_queues / trace.rounds_executed
        lyapunov_trace = np.array([r.lyapunov for r in trace.records])
    else:
        stability = None
        lyapunov_trace = None
    return MetricsReport(
        jfi=jain_fairness_index(counts, qualities.scaled),
        final_accuracy=trace.final_accuracy,
        rounds_executed=trace.rounds_executed,
        participation=counts,
        stability=stability,
        lyapunov_trace=lyapunov_trace,
    )
