"""Virtual-queue fairness mechanism and the client-selection policies.

Each client carries a non-negative virtual queue that accumulates
"owed participation" while the client sits idle and drains by one when
it is selected. The flagship policy ranks clients by a composite
suitability index, sigma * reputation + queue, so persistent losers on
reputation alone eventually win on backlog. A quadratic potential over
the queues, with a per-round drift bound, certifies that the backlog
stays mean-rate stable.

Baselines: uniform random selection, greedy top-reputation, a
reputation-blind fixed-increment queue variant (used both as the
published baseline and as the ablation of the flagship policy), and a
proxy that discounts reputation by past participation rate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SeedLike = int | np.random.SeedSequence | np.random.Generator


@dataclass(frozen=True)
class FairnessParams:
    """Selection trade-off sigma, idle-credit rate epsilon, drift slack theta.

    theta = 1 is the tight constant for credits and participation
    indicators bounded by 1 (half the sum of their squared maxima).
    """

    sigma: float
    epsilon: float
    theta: float = 1.0

    def __post_init__(self) -> None:
        if self.sigma <= 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if not 0 <= self.epsilon <= 1:
            raise ValueError(f"epsilon must be in [0, 1], got {self.epsilon}")


@dataclass(frozen=True)
class VirtualQueueState:
    """Per-client queue lengths at the start of round ``round``."""

    queues: np.ndarray
    round: int = 0

    def __post_init__(self) -> None:
        if np.any(np.asarray(self.queues) < 0):
            raise ValueError("queues must be non-negative")


def init_queues(num_clients: int) -> VirtualQueueState:
    """All queues start empty: no accumulated unfairness."""
    if num_clients < 1:
        raise ValueError(f"num_clients must be >= 1, got {num_clients}")
    return VirtualQueueState(queues=np.zeros(num_clients), round=0)


@dataclass(frozen=True)
class SelectionDecision:
    """One round's outcome: chosen ids, per-client scores, realized utility.

    ``csi`` is None for policies that rank by something other than the
    composite suitability index. ``utility`` is the summed reputation of
    the selected clients.
    """

    round: int
    selected: np.ndarray
    csi: np.ndarray | None
    utility: float


def unfairness_rate(r: float, selected: bool, epsilon: float) -> float:
    """Queue credit earned this round: epsilon * r while idle, 0 if selected."""
    return 0.0 if selected else epsilon * r


def queue_step(q: float, c: float, x: float) -> float:
    """Single-queue update: max(0, q + credit - participation)."""
    return max(0.0, q + c - x)


def csi(params: FairnessParams, r: float, q: float) -> float:
    """Composite suitability index: sigma * reputation + queue backlog."""
    return params.sigma * r + q


def lyapunov_value(queues: np.ndarray) -> float:
    """Quadratic backlog potential: half the sum of squared queue lengths."""
    queues = np.asarray(queues, dtype=float)
    return 0.5 * float(np.dot(queues, queues))


def _selection_mask(n: int, selected: np.ndarray) -> np.ndarray:
    mask = np.zeros(n)
    mask[selected] = 1.0
    return mask


def _top_m(scores: np.ndarray, m: int, tie_seed: SeedLike) -> np.ndarray:
    """Indices of the m largest scores, ascending; ties broken uniformly."""
    scores = np.asarray(scores, dtype=float)
    n = scores.size
    if not 1 <= m <= n:
        raise ValueError(f"m must be in [1, {n}], got {m}")
    shuffle = np.random.default_rng(tie_seed).permutation(n)
    order = shuffle[np.argsort(-scores[shuffle], kind="stable")]
    return np.sort(order[:m])


def select_fairfedcs(
    reputations: np.ndarray,
    queues: VirtualQueueState,
    params: FairnessParams,
    m: int,
    tie_seed: SeedLike,
) -> SelectionDecision:
    """Pick the top-m clients by composite suitability index.

    Because the objective is a sum of per-client scores, the greedy
    top-m set maximizes it over all m-subsets exactly.
    """
    reputations = np.asarray(reputations, dtype=float)
    scores = params.sigma * reputations + queues.queues
    selected = _top_m(scores, m, tie_seed)
    return SelectionDecision(
        round=queues.round,
        selected=selected,
        csi=scores,
        utility=float(reputations[selected].sum()),
    )


def select_greedy(
    reputations: np.ndarray, m: int, tie_seed: SeedLike, round_index: int = 0
) -> SelectionDecision:
    """Pick the top-m clients by reputation alone."""
    reputations = np.asarray(reputations, dtype=float)
    selected = _top_m(reputations, m, tie_seed)
    return SelectionDecision(
        round=round_index,
        selected=selected,
        csi=None,
        utility=float(reputations[selected].sum()),
    )


def select_random(
    n: int,
    m: int,
    seed: SeedLike,
    reputations: np.ndarray | None = None,
    round_index: int = 0,
) -> SelectionDecision:
    """Pick a uniform m-subset; utility is filled when reputations are given."""
    if not 1 <= m <= n:
        raise ValueError(f"m must be in [1, {n}], got {m}")
    selected = np.sort(np.random.default_rng(seed).choice(n, size=m, replace=False))
    utility = 0.0
    if reputations is not None:
        utility = float(np.asarray(reputations, dtype=float)[selected].sum())
    return SelectionDecision(round=round_index, selected=selected, csi=None, utility=utility)


def select_rbff_proxy(
    reputations: np.ndarray,
    participation_counts: np.ndarray,
    total_participations: int,
    m: int,
    tie_seed: SeedLike,
    round_index: int = 0,
) -> SelectionDecision:
    """Pick top-m by reputation discounted by participation rate.

    score = r * (1 - count / max(1, total)). Stands in for schedulers
    that trade reputation against how often a client has already served.
    """
    reputations = np.asarray(reputations, dtype=float)
    counts = np.asarray(participation_counts, dtype=float)
    if int(counts.sum()) != total_participations:
        raise ValueError(
            f"total_participations {total_participations} != sum of counts {int(counts.sum())}"
        )
    rates = counts / max(1, total_participations)
    scores = reputations * (1.0 - rates)
    selected = _top_m(scores, m, tie_seed)
    return SelectionDecision(
        round=round_index,
        selected=selected,
        csi=None,
        utility=float(reputations[selected].sum()),
    )


def step_queues(
    queues: VirtualQueueState,
    reputations: np.ndarray,
    decision: SelectionDecision,
    params: FairnessParams,
) -> VirtualQueueState:
    """Advance all queues one round with reputation-weighted idle credits."""
    reputations = np.asarray(reputations, dtype=float)
    x = _selection_mask(queues.queues.size, decision.selected)
    c = params.epsilon * reputations * (1.0 - x)
    return VirtualQueueState(
        queues=np.maximum(0.0, queues.queues + c - x), round=queues.round + 1
    )


def step_queues_rbcsf(
    queues: VirtualQueueState, decision: SelectionDecision, eta: float
) -> VirtualQueueState:
    """Advance all queues with a reputation-blind constant credit eta."""
    if not 0 <= eta <= 1:
        raise ValueError(f"eta must be in [0, 1], got {eta}")
    x = _selection_mask(queues.queues.size, decision.selected)
    return VirtualQueueState(
        queues=np.maximum(0.0, queues.queues + eta - x), round=queues.round + 1
    )


def idle_credits(
    reputations: np.ndarray, decision: SelectionDecision, params: FairnessParams
) -> np.ndarray:
    """Per-client credit vector realized by ``step_queues`` for this round."""
    reputations = np.asarray(reputations, dtype=float)
    x = _selection_mask(reputations.size, decision.selected)
    return params.epsilon * reputations * (1.0 - x)


def drift_bound_residual(
    prev_queues: np.ndarray,
    next_queues: np.ndarray,
    c: np.ndarray,
    x: np.ndarray,
    params: FairnessParams,
) -> float:
    """Slack of the one-round drift bound: bound minus realized potential change.

    The bound is sum_i (Q_i * (c_i - x_i) + theta). Non-negative for
    every transition with credits and participation indicators in [0, 1].
    """
    prev_queues = np.asarray(prev_queues, dtype=float)
    next_queues = np.asarray(next_queues, dtype=float)
    c = np.asarray(c, dtype=float)
    x = np.asarray(x, dtype=float)
    expected = np.maximum(0.0, prev_queues + c - x)
    if not np.allclose(next_queues, expected, rtol=0.0, atol=1e-9):
        raise ValueError("next_queues is not the queue-step image of prev_queues under (c, x)")
    bound = float(np.dot(prev_queues, c - x) + params.theta * prev_queues.size)
    drift = lyapunov_value(next_queues) - lyapunov_value(prev_queues)
    return bound - drift
