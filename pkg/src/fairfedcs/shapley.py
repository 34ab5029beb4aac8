"""Shapley-value contribution scoring over coalitions of clients.

The value function maps a coalition (tuple of player indices) to a real
score, typically the evaluation accuracy of a model aggregated from that
coalition's updates. Scores are normalized so the per-player values sum
to ``value_fn(all) - value_fn(empty)``.

``sampled_shapley`` follows the permutation-sampling estimator with
within-permutation truncation: once the running prefix value is within
``truncation_tol`` of the grand-coalition value, the remaining marginals
in that permutation are taken as zero. When ``num_permutations`` covers
every permutation, it enumerates them instead of sampling, which makes
the estimate exact at zero truncation tolerance.
"""

from __future__ import annotations

import itertools
import math
from typing import Callable, Iterable, Mapping

import numpy as np

from .simdata import Dataset
from .training import ModelState, aggregate, evaluate

ValueFn = Callable[[tuple[int, ...]], float]


class _CoalitionCache:
    """Memoizes the value function on canonical (sorted) coalitions."""

    def __init__(self, value_fn: ValueFn):
        self._value_fn = value_fn
        self._cache: dict[frozenset[int], float] = {}

    def __call__(self, players: Iterable[int]) -> float:
        key = frozenset(players)
        if key not in self._cache:
            self._cache[key] = float(self._value_fn(tuple(sorted(key))))
        return self._cache[key]

    def __len__(self) -> int:
        return len(self._cache)


class CoalitionValueOracle:
    """Coalition -> accuracy map for one round's selected clients.

    Callable on tuples of member positions (0..n-1); position j stands
    for ``members[j]``. The empty coalition evaluates the previous
    global model, any other coalition the mean of its members' local
    models. Evaluations are memoized per coalition; ``evaluations``
    counts the distinct coalitions actually scored.
    """

    def __init__(self, members: tuple[int, ...], value_fn: ValueFn):
        self.members = members
        self._value = _CoalitionCache(value_fn)

    def __call__(self, players: Iterable[int]) -> float:
        return self._value(players)

    @property
    def base_accuracy(self) -> float:
        return self._value(())

    @property
    def evaluations(self) -> int:
        return len(self._value)


def round_coalition_oracle(
    prev_global: ModelState,
    updates: Mapping[int, ModelState],
    eval_set: Dataset,
) -> CoalitionValueOracle:
    """Build the accuracy oracle over this round's submitted local models."""
    if not updates:
        raise ValueError("updates must be non-empty")
    members = tuple(sorted(updates))
    models = [updates[i] for i in members]
    if any(m.weights.shape != prev_global.weights.shape for m in models):
        raise ValueError("all updates must share the global model's dimensions")

    def value_fn(positions: tuple[int, ...]) -> float:
        if not positions:
            model = prev_global
        else:
            model = aggregate([models[p] for p in positions])
        return evaluate(model, eval_set)[0]

    return CoalitionValueOracle(members=members, value_fn=value_fn)


def exact_shapley(value_fn: ValueFn, num_players: int) -> np.ndarray:
    """Compute exact Shapley values by enumerating all coalitions.

    Cost grows as 2**num_players evaluations; intended for small
    coalitions and for checking the sampled estimator.
    """
    if num_players < 1:
        raise ValueError(f"num_players must be >= 1, got {num_players}")
    if num_players > 12:
        raise ValueError(
            f"num_players={num_players} exceeds the exact enumeration limit "
            "of 12; use sampled_shapley instead"
        )
    value = _CoalitionCache(value_fn)
    players = list(range(num_players))
    phi = np.zeros(num_players)
    for i in players:
        others = [p for p in players if p != i]
        total = 0.0
        for size in range(num_players):
            weight = 1.0 / math.comb(num_players - 1, size)
            for subset in itertools.combinations(others, size):
                total += weight * (value(subset + (i,)) - value(subset))
        phi[i] = total / num_players
    return phi


def sampled_shapley(
    value_fn: ValueFn,
    num_players: int,
    num_permutations: int,
    rng: np.random.Generator,
    truncation_tol: float = 0.0,
) -> np.ndarray:
    """Estimate Shapley values from sampled player permutations.

    Marginals are accumulated along each permutation's prefix chain. If
    ``num_permutations >= num_players!`` every permutation is visited
    exactly once (no sampling noise). ``truncation_tol`` short-circuits a
    permutation once the prefix value is that close to the full value.
    """
    if num_players < 1:
        raise ValueError(f"num_players must be >= 1, got {num_players}")
    if num_permutations < 1:
        raise ValueError(f"num_permutations must be >= 1, got {num_permutations}")
    if truncation_tol < 0:
        raise ValueError(f"truncation_tol must be >= 0, got {truncation_tol}")

    value = _CoalitionCache(value_fn)
    players = list(range(num_players))
    full_value = value(players)

    total_perms = math.factorial(num_players)
    if num_permutations >= total_perms:
        perms: Iterable[tuple[int, ...]] = itertools.permutations(players)
        count = total_perms
    else:
        perms = (tuple(rng.permutation(num_players)) for _ in range(num_permutations))
        count = num_permutations

    phi = np.zeros(num_players)
    for perm in perms:
        prefix: list[int] = []
        prev = value(prefix)
        for pos, player in enumerate(perm):
            if abs(full_value - prev) < truncation_tol and pos > 0:
                break
            prefix.append(player)
            cur = value(prefix)
            phi[player] += cur - prev
            prev = cur
    return phi / count
