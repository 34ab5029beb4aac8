"""Contribution-based client reputation built on beta-posterior counters.

Each client carries a pair of counters: rounds in which its update was
scored as a positive contribution and rounds scored as negative. The
reputation value is the posterior mean of Beta(positives+1, negatives+1),
so a fresh client starts at 0.5 and the value always stays strictly
inside (0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class ReputationRecord:
    """Per-client contribution counters.

    ``positive_count + negative_count`` equals the number of rounds in
    which the client was selected and its contribution scored.
    """

    client_id: int
    positive_count: int = 0
    negative_count: int = 0

    def __post_init__(self) -> None:
        if self.positive_count < 0 or self.negative_count < 0:
            raise ValueError(
                f"counters must be non-negative, got "
                f"({self.positive_count}, {self.negative_count})"
            )


def init_reputation(num_clients: int) -> list[ReputationRecord]:
    """Create the initial reputation table: all counters zero (value 0.5)."""
    if num_clients < 1:
        raise ValueError(f"num_clients must be >= 1, got {num_clients}")
    return [ReputationRecord(client_id=i) for i in range(num_clients)]


def reputation_value(rec: ReputationRecord) -> float:
    """Posterior-mean reputation: (positives + 1) / (positives + negatives + 2)."""
    a, b = rec.positive_count, rec.negative_count
    return (a + 1) / (a + b + 2)


def record_contribution(rec: ReputationRecord, shapley_value: float) -> ReputationRecord:
    """Return the record updated with one scored round.

    A non-negative contribution value increments the positive counter
    (zero counts as positive); a negative one increments the negative
    counter. The input record is not mutated.
    """
    if not math.isfinite(shapley_value):
        raise ValueError(f"shapley_value must be finite, got {shapley_value!r}")
    if shapley_value >= 0:
        return replace(rec, positive_count=rec.positive_count + 1)
    return replace(rec, negative_count=rec.negative_count + 1)
