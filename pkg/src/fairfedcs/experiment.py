"""End-to-end federated simulation: select, train, aggregate, score, update.

One experiment runs rounds of: (1) pick m clients under the configured
policy, (2) train their local models from the current global model,
(3) average them into the next global model, (4) score each selected
client's contribution with a coalition-accuracy Shapley value, (5) fold
the contribution signs into the reputation table, (6) advance the
fairness queues (for the policies that keep them), (7) evaluate on the
server test set. Runs stop at ``max_rounds`` or once the test loss has
gone ``patience`` consecutive rounds without improving.

Determinism: every random draw comes from a seed stream derived from
(config.seed, purpose, round, client), so identical configs reproduce
bit-identical traces, and data/training randomness is shared across
policies under the same seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ExperimentConfig
from .fairness import (
    FairnessParams,
    SelectionDecision,
    VirtualQueueState,
    idle_credits,
    init_queues,
    lyapunov_value,
    select_fairfedcs,
    select_greedy,
    select_random,
    select_rbff_proxy,
    step_queues,
    step_queues_rbcsf,
)
from .reputation import init_reputation, record_contribution, reputation_value
from .shapley import exact_shapley, round_coalition_oracle, sampled_shapley
from .simdata import ClientDataProfile, Dataset, generate_scenario1, generate_scenario2
from .training import ModelState, aggregate, evaluate, init_model, local_train

QUEUE_POLICIES = ("fairfedcs", "rbcsf", "ablation")

# Purposes for per-draw seed streams derived from the experiment seed.
_DATA, _TRAIN, _SHAPLEY, _TIE, _POLICY = 1, 2, 3, 4, 5


def _stream(*key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(key)


@dataclass(frozen=True)
class RoundRecord:
    """Everything observed in one round, indexed at selection time.

    Reputation counters and queues are the values the selector saw;
    ``phi`` holds contribution scores for the selected clients and NaN
    elsewhere; ``credits`` is the queue credit vector realized this
    round (None for policies without queues).
    """

    round_index: int
    selected: np.ndarray
    reputation: np.ndarray
    positive: np.ndarray
    negative: np.ndarray
    queues: np.ndarray | None
    csi: np.ndarray | None
    phi: np.ndarray
    credits: np.ndarray | None
    test_accuracy: float
    test_loss: float
    utility: float
    lyapunov: float | None


@dataclass(frozen=True)
class ExperimentTrace:
    """Full run history plus the post-final-round client state."""

    config: ExperimentConfig
    profiles: list[ClientDataProfile]
    records: list[RoundRecord]
    rounds_executed: int
    final_accuracy: float
    final_loss: float
    final_positive: np.ndarray
    final_negative: np.ndarray
    final_queues: np.ndarray | None
    minority_class_accuracy: float | None


def generate_data(
    config: ExperimentConfig,
) -> tuple[list[ClientDataProfile], list[Dataset], Dataset]:
    """Build the configured scenario's client datasets and server test set."""
    data_seed = _stream(config.seed, _DATA)
    if config.scenario == 1:
        return generate_scenario1(
            config.n_clients,
            config.samples_per_client,
            config.n_classes,
            config.feature_dim,
            data_seed,
        )
    return generate_scenario2(
        config.n_clients,
        config.samples_per_client,
        config.n_classes,
        config.feature_dim,
        config.p_minority,
        data_seed,
    )


def _select(
    config: ExperimentConfig,
    t: int,
    reputations: np.ndarray,
    qstate: VirtualQueueState | None,
    params: FairnessParams,
    participation: np.ndarray,
) -> SelectionDecision:
    tie_seed = _stream(config.seed, _TIE, t)
    if config.policy in QUEUE_POLICIES:
        assert qstate is not None
        return select_fairfedcs(reputations, qstate, params, config.m, tie_seed)
    if config.policy == "greedy":
        return select_greedy(reputations, config.m, tie_seed, round_index=t)
    if config.policy == "random":
        return select_random(
            config.n_clients,
            config.m,
            _stream(config.seed, _POLICY, t),
            reputations=reputations,
            round_index=t,
        )
    if config.policy == "rbff_proxy":
        return select_rbff_proxy(
            reputations,
            participation,
            int(participation.sum()),
            config.m,
            tie_seed,
            round_index=t,
        )
    raise ValueError(f"unhandled policy {config.policy!r}")


def _score_contributions(
    config: ExperimentConfig,
    t: int,
    prev_global: ModelState,
    updates: dict[int, ModelState],
    test_set: Dataset,
) -> dict[int, float]:
    oracle = round_coalition_oracle(prev_global, updates, test_set)
    n = len(oracle.members)
    if config.shapley_mode == "exact":
        values = exact_shapley(oracle, n)
    else:
        values = sampled_shapley(
            oracle,
            n,
            config.shapley_permutations,
            np.random.default_rng(_stream(config.seed, _SHAPLEY, t)),
            config.truncation_tol,
        )
    return dict(zip(oracle.members, values))


def run_experiment(
    config: ExperimentConfig,
    data: tuple[list[ClientDataProfile], list[Dataset], Dataset] | None = None,
) -> ExperimentTrace:
    """Execute one full federated run and return its trace.

    ``data`` overrides scenario generation with pre-built
    (profiles, datasets, test_set), e.g. for controlled populations.
    """
    profiles, datasets, test_set = data if data is not None else generate_data(config)
    if len(datasets) != config.n_clients:
        raise ValueError(
            f"config expects {config.n_clients} clients, data provides {len(datasets)}"
        )

    params = FairnessParams(sigma=config.sigma, epsilon=config.epsilon)
    table = init_reputation(config.n_clients)
    uses_queues = config.policy in QUEUE_POLICIES
    qstate = init_queues(config.n_clients) if uses_queues else None
    participation = np.zeros(config.n_clients, dtype=np.int64)
    global_model = init_model(config.n_classes, config.feature_dim)

    records: list[RoundRecord] = []
    best_loss = np.inf
    best_round = 0
    for t in range(config.max_rounds):
        reputations = np.array([reputation_value(rec) for rec in table])
        positive = np.array([rec.positive_count for rec in table], dtype=np.int64)
        negative = np.array([rec.negative_count for rec in table], dtype=np.int64)
        decision = _select(config, t, reputations, qstate, params, participation)
        selected = decision.selected

        updates = {
            int(i): local_train(
                global_model,
                datasets[int(i)],
                config.lr,
                config.epochs,
                config.batch_size,
                _stream(config.seed, _TRAIN, t, int(i)),
            )
            for i in selected
        }
        next_global = aggregate([updates[int(i)] for i in selected])
        phi_by_id = _score_contributions(config, t, global_model, updates, test_set)
        global_model = next_global

        phi = np.full(config.n_clients, np.nan)
        for i, value in phi_by_id.items():
            phi[i] = value
            table[i] = record_contribution(table[i], value)
        participation[selected] += 1

        if uses_queues:
            assert qstate is not None
            queues_before = qstate.queues
            if config.policy == "fairfedcs":
                credits = idle_credits(reputations, decision, params)
                qstate = step_queues(qstate, reputations, decision, params)
            else:
                credits = np.full(config.n_clients, config.eta_value)
                qstate = step_queues_rbcsf(qstate, decision, config.eta_value)
            lyapunov = lyapunov_value(queues_before)
        else:
            queues_before = None
            credits = None
            lyapunov = None

        accuracy, loss = evaluate(global_model, test_set)
        records.append(
            RoundRecord(
                round_index=t,
                selected=selected,
                reputation=reputations,
                positive=positive,
                negative=negative,
                queues=queues_before,
                csi=decision.csi,
                phi=phi,
                credits=credits,
                test_accuracy=accuracy,
                test_loss=loss,
                utility=decision.utility,
                lyapunov=lyapunov,
            )
        )

        if loss < best_loss:
            best_loss = loss
            best_round = t
        elif t - best_round >= config.patience:
            break

    last = records[-1]
    minority_accuracy = None
    if config.scenario == 2:
        minority_mask = test_set.labels == config.n_classes - 1
        minority_set = Dataset(
            features=test_set.features[minority_mask], labels=test_set.labels[minority_mask]
        )
        minority_accuracy, _ = evaluate(global_model, minority_set)

    return ExperimentTrace(
        config=config,
        profiles=profiles,
        records=records,
        rounds_executed=len(records),
        final_accuracy=last.test_accuracy,
        final_loss=last.test_loss,
        final_positive=np.array([rec.positive_count for rec in table], dtype=np.int64),
        final_negative=np.array([rec.negative_count for rec in table], dtype=np.int64),
        final_queues=None if qstate is None else qstate.queues,
        minority_class_accuracy=minority_accuracy,
    )
