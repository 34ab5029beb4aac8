"""Desk-scale local training: multinomial logistic regression via SGD.

The global model is a single softmax layer (weights K x d plus bias),
trained locally with mini-batch cross-entropy SGD and aggregated by
plain parameter averaging. Small enough that coalition re-aggregation
and evaluation inside contribution scoring stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .simdata import Dataset


@dataclass(frozen=True)
class ModelState:
    """Softmax-classifier parameters: weights (K, d) and bias (K,)."""

    weights: np.ndarray
    bias: np.ndarray

    def __post_init__(self) -> None:
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[0],):
            raise ValueError(
                f"expected weights (K, d) with bias (K,), got "
                f"{self.weights.shape} and {self.bias.shape}"
            )
        if not (np.isfinite(self.weights).all() and np.isfinite(self.bias).all()):
            raise ValueError("model parameters must be finite")


def init_model(n_classes: int, feature_dim: int) -> ModelState:
    """All-zero parameters: uniform predictive distribution over classes."""
    return ModelState(weights=np.zeros((n_classes, feature_dim)), bias=np.zeros(n_classes))


def _logits(model: ModelState, features: np.ndarray) -> np.ndarray:
    return features @ model.weights.T + model.bias


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def cross_entropy_gradient(
    model: ModelState, features: np.ndarray, labels: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Mean cross-entropy gradient w.r.t. weights and bias."""
    probs = _softmax(_logits(model, features))
    probs[np.arange(len(labels)), labels] -= 1.0
    probs /= len(labels)
    return probs.T @ features, probs.sum(axis=0)


def local_train(
    model: ModelState,
    dataset: Dataset,
    lr: float,
    epochs: int,
    batch_size: int,
    seed: int | np.random.SeedSequence | np.random.Generator,
) -> ModelState:
    """Run mini-batch SGD from ``model`` and return the trained parameters.

    Sample order is reshuffled every epoch from ``seed``; the trailing
    partial batch is kept. ``epochs=0`` returns the model unchanged.
    """
    if len(dataset) == 0:
        raise ValueError("cannot train on an empty dataset")
    if lr <= 0 or epochs < 0 or batch_size < 1:
        raise ValueError(
            f"invalid hyperparameters: lr={lr}, epochs={epochs}, batch_size={batch_size}"
        )
    rng = np.random.default_rng(seed)
    weights = model.weights.copy()
    bias = model.bias.copy()
    n = len(dataset)
    for _ in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            batch = order[start:start + batch_size]
            grad_w, grad_b = cross_entropy_gradient(
                ModelState(weights, bias), dataset.features[batch], dataset.labels[batch]
            )
            weights = weights - lr * grad_w
            bias = bias - lr * grad_b
    return ModelState(weights=weights, bias=bias)


def aggregate(models: Sequence[ModelState]) -> ModelState:
    """Element-wise mean of the parameters (equal-sized client datasets)."""
    if not models:
        raise ValueError("cannot aggregate zero models")
    shape = models[0].weights.shape
    if any(m.weights.shape != shape for m in models):
        raise ValueError("all models must share parameter dimensions")
    return ModelState(
        weights=np.mean([m.weights for m in models], axis=0),
        bias=np.mean([m.bias for m in models], axis=0),
    )


def evaluate(model: ModelState, test_set: Dataset) -> tuple[float, float]:
    """Accuracy (argmax, lowest index wins ties) and mean cross-entropy."""
    if len(test_set) == 0:
        raise ValueError("cannot evaluate on an empty test set")
    logits = _logits(model, test_set.features)
    predictions = logits.argmax(axis=1)
    accuracy = float(np.mean(predictions == test_set.labels))
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    log_probs = shifted[np.arange(len(test_set)), test_set.labels] - log_norm
    return accuracy, float(-log_probs.mean())
