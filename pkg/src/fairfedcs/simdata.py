"""Synthetic federation scenarios on a Gaussian-mixture classification task.

Features for class k are drawn from an isotropic unit-variance Gaussian
centered at ``MEAN_SCALE`` times the k-th standard basis vector, so the
classes are linearly separable with roughly 95% best-case accuracy at
the default scale. Two client populations are provided:

* Scenario 1: every client holds all classes; label-noise fractions
  cycle through (0%, 5%, ..., 45%) in blocks of ten clients.
* Scenario 2: three minority clients hold all classes (including the
  otherwise-absent last class) at a fixed noise level; everyone else
  holds only the first K-1 classes with the scenario-1 noise schedule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Pairwise mean distance MEAN_SCALE*sqrt(2) with unit variance puts the
# 10-class best achievable accuracy near 0.95.
MEAN_SCALE = 3.5

NOISE_SCHEDULE_BLOCK = 10
NUM_MINORITY_CLIENTS = 3


@dataclass(frozen=True)
class ClientDataProfile:
    """Ground-truth data quality descriptors for one client."""

    client_id: int
    n_classes: int
    noise_fraction: float
    sample_count: int
    is_minority: bool = False

    def __post_init__(self) -> None:
        if not 0 <= self.noise_fraction < 1:
            raise ValueError(f"noise_fraction must be in [0, 1), got {self.noise_fraction}")
        if self.sample_count < 1:
            raise ValueError(f"sample_count must be positive, got {self.sample_count}")


@dataclass(frozen=True)
class Dataset:
    """Feature matrix (n, d) with integer labels (n,)."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        if len(self.features) != len(self.labels):
            raise ValueError(
                f"features/labels length mismatch: {len(self.features)} vs {len(self.labels)}"
            )

    def __len__(self) -> int:
        return len(self.labels)


def class_means(n_classes: int, feature_dim: int, scale: float = MEAN_SCALE) -> np.ndarray:
    """Mixture component centers: scaled one-hot rows, shape (K, d)."""
    if feature_dim < n_classes:
        raise ValueError(
            f"feature_dim must be >= n_classes, got {feature_dim} < {n_classes}"
        )
    means = np.zeros((n_classes, feature_dim))
    means[np.arange(n_classes), np.arange(n_classes)] = scale
    return means


def sample_dataset(
    means: np.ndarray,
    classes: np.ndarray,
    count: int,
    rng: np.random.Generator,
    balanced: bool = False,
) -> Dataset:
    """Draw ``count`` labeled points from the mixture restricted to ``classes``.

    ``balanced`` assigns labels round-robin (exact per-class counts);
    otherwise labels are drawn uniformly at random from ``classes``.
    """
    classes = np.asarray(classes, dtype=np.int64)
    if balanced:
        labels = classes[np.arange(count) % classes.size]
    else:
        labels = classes[rng.integers(0, classes.size, size=count)]
    features = means[labels] + rng.standard_normal((count, means.shape[1]))
    return Dataset(features=features, labels=labels)


def inject_label_noise(
    dataset: Dataset,
    p: float,
    seed: int | np.random.SeedSequence | np.random.Generator,
    num_labels: int | None = None,
) -> Dataset:
    """Flip a uniform floor(p * len) subset of labels to a different label.

    Replacement labels are uniform over the other ``num_labels - 1``
    values, so every flip changes the label. ``num_labels`` defaults to
    one past the largest label present; pass it explicitly when the
    dataset's label universe is a strict subset of the task's classes.
    """
    if not 0 <= p < 1:
        raise ValueError(f"p must be in [0, 1), got {p}")
    n = len(dataset)
    n_flip = int(p * n)
    if n_flip == 0:
        return dataset
    if num_labels is None:
        num_labels = int(dataset.labels.max()) + 1
    rng = np.random.default_rng(seed)
    flip_idx = rng.choice(n, size=n_flip, replace=False)
    offsets = rng.integers(1, num_labels, size=n_flip)
    labels = dataset.labels.copy()
    labels[flip_idx] = (labels[flip_idx] + offsets) % num_labels
    return Dataset(features=dataset.features, labels=labels)


def noise_schedule(client_id: int) -> float:
    """Noise fraction for a scenario-1 client: 5% steps, cycling every 10 ids."""
    return 0.05 * (client_id % NOISE_SCHEDULE_BLOCK)


def _split_streams(seed: int | np.random.SeedSequence, n_clients: int):
    """One child seed per client dataset, per client noise pass, plus test set."""
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = root.spawn(2 * n_clients + 1)
    return children[:n_clients], children[n_clients:2 * n_clients], children[-1]


def generate_scenario1(
    n_clients: int,
    samples_per_client: int,
    n_classes: int,
    feature_dim: int,
    seed: int | np.random.SeedSequence,
    test_size: int = 2000,
) -> tuple[list[ClientDataProfile], list[Dataset], Dataset]:
    """Uniform-coverage population with a cyclic label-noise schedule."""
    if n_clients < 1 or n_clients % NOISE_SCHEDULE_BLOCK != 0:
        raise ValueError(
            f"n_clients must be a positive multiple of {NOISE_SCHEDULE_BLOCK}, got {n_clients}"
        )
    means = class_means(n_classes, feature_dim)
    all_classes = np.arange(n_classes)
    data_seeds, noise_seeds, test_seed = _split_streams(seed, n_clients)

    profiles = []
    datasets = []
    for i in range(n_clients):
        p = noise_schedule(i)
        profiles.append(
            ClientDataProfile(
                client_id=i,
                n_classes=n_classes,
                noise_fraction=p,
                sample_count=samples_per_client,
            )
        )
        clean = sample_dataset(
            means, all_classes, samples_per_client, np.random.default_rng(data_seeds[i])
        )
        datasets.append(inject_label_noise(clean, p, noise_seeds[i], num_labels=n_classes))

    test_set = sample_dataset(
        means, all_classes, test_size, np.random.default_rng(test_seed), balanced=True
    )
    return profiles, datasets, test_set


def generate_scenario2(
    n_clients: int,
    samples_per_client: int,
    n_classes: int,
    feature_dim: int,
    p_minority: float,
    seed: int | np.random.SeedSequence,
    test_size: int = 2000,
) -> tuple[list[ClientDataProfile], list[Dataset], Dataset]:
    """Population where only three minority clients hold the last class.

    Minority clients (ids 0..2) carry all classes at noise ``p_minority``;
    the rest carry classes 0..K-2 with the scenario-1 noise schedule.
    """
    if n_clients < NUM_MINORITY_CLIENTS + 1:
        raise ValueError(f"n_clients must be >= {NUM_MINORITY_CLIENTS + 1}, got {n_clients}")
    if not 0 <= p_minority < 1:
        raise ValueError(f"p_minority must be in [0, 1), got {p_minority}")
    means = class_means(n_classes, feature_dim)
    all_classes = np.arange(n_classes)
    majority_classes = np.arange(n_classes - 1)
    data_seeds, noise_seeds, test_seed = _split_streams(seed, n_clients)

    profiles = []
    datasets = []
    for i in range(n_clients):
        minority = i < NUM_MINORITY_CLIENTS
        if minority:
            classes, p, held = all_classes, p_minority, n_classes
        else:
            classes, p, held = majority_classes, noise_schedule(i), n_classes - 1
        profiles.append(
            ClientDataProfile(
                client_id=i,
                n_classes=held,
                noise_fraction=p,
                sample_count=samples_per_client,
                is_minority=minority,
            )
        )
        clean = sample_dataset(
            means, classes, samples_per_client, np.random.default_rng(data_seeds[i])
        )
        # Noise stays inside each group's label universe so majority
        # clients never acquire the minority class by flipping.
        datasets.append(inject_label_noise(clean, p, noise_seeds[i], num_labels=classes.size))

    test_set = sample_dataset(
        means, all_classes, test_size, np.random.default_rng(test_seed), balanced=True
    )
    return profiles, datasets, test_set
