"""Experiment configuration: TOML parsing, validation, and defaults."""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

POLICIES = ("fairfedcs", "random", "greedy", "rbcsf", "rbff_proxy", "ablation")
SHAPLEY_MODES = ("exact", "sampled")
REQUIRED_KEYS = ("scenario", "policy", "seed")


class ConfigError(ValueError):
    """Raised for missing, unknown, or out-of-range configuration values."""


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: int
    policy: str
    seed: int
    n_clients: int = 40
    m: int = 4
    sigma: float = 0.6
    epsilon_override: float | None = None
    eta: float | None = None
    p_minority: float = 0.1
    n_classes: int = 10
    feature_dim: int = 16
    samples_per_client: int = 1100
    lr: float = 0.05
    epochs: int = 1
    batch_size: int = 32
    shapley_mode: str = "exact"
    shapley_permutations: int = 200
    truncation_tol: float = 0.0
    max_rounds: int = 500
    patience: int = 20

    def __post_init__(self) -> None:
        def fail(msg: str) -> None:
            raise ConfigError(msg)

        if self.scenario not in (1, 2):
            fail(f"scenario must be 1 or 2, got {self.scenario!r}")
        if self.policy not in POLICIES:
            fail(f"policy must be one of {POLICIES}, got {self.policy!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            fail(f"seed must be a non-negative integer, got {self.seed!r}")
        if self.n_clients < 1:
            fail(f"n_clients must be >= 1, got {self.n_clients}")
        if not 1 <= self.m <= self.n_clients:
            fail(f"m must be in [1, n_clients], got {self.m}")
        if self.sigma <= 0:
            fail(f"sigma must be > 0, got {self.sigma}")
        if self.epsilon_override is not None and not 0 < self.epsilon_override <= 1:
            fail(f"epsilon_override must be in (0, 1], got {self.epsilon_override}")
        if self.eta is not None and not 0 < self.eta <= 1:
            fail(f"eta must be in (0, 1], got {self.eta}")
        if not 0 <= self.p_minority < 1:
            fail(f"p_minority must be in [0, 1), got {self.p_minority}")
        if self.n_classes < 2:
            fail(f"n_classes must be >= 2, got {self.n_classes}")
        if self.feature_dim < self.n_classes:
            fail(f"feature_dim must be >= n_classes, got {self.feature_dim}")
        if self.samples_per_client < 1:
            fail(f"samples_per_client must be >= 1, got {self.samples_per_client}")
        if self.lr <= 0:
            fail(f"lr must be > 0, got {self.lr}")
        if self.epochs < 0:
            fail(f"epochs must be >= 0, got {self.epochs}")
        if self.batch_size < 1:
            fail(f"batch_size must be >= 1, got {self.batch_size}")
        if self.shapley_mode not in SHAPLEY_MODES:
            fail(f"shapley_mode must be one of {SHAPLEY_MODES}, got {self.shapley_mode!r}")
        if self.shapley_permutations < 1:
            fail(f"shapley_permutations must be >= 1, got {self.shapley_permutations}")
        if self.truncation_tol < 0:
            fail(f"truncation_tol must be >= 0, got {self.truncation_tol}")
        if self.max_rounds < 1:
            fail(f"max_rounds must be >= 1, got {self.max_rounds}")
        if self.patience < 1:
            fail(f"patience must be >= 1, got {self.patience}")

    @property
    def epsilon(self) -> float:
        """Idle-credit rate: explicit override or the m/N participation share."""
        if self.epsilon_override is not None:
            return self.epsilon_override
        return self.m / self.n_clients

    @property
    def eta_value(self) -> float:
        """Fixed queue increment for reputation-blind queues, default m/N."""
        if self.eta is not None:
            return self.eta
        return self.m / self.n_clients

    def to_dict(self) -> dict[str, Any]:
        """Flat echo of every field with epsilon and eta resolved."""
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["epsilon"] = self.epsilon
        out["eta"] = self.eta_value
        del out["epsilon_override"]
        return out


def config_from_mapping(raw: Mapping[str, Any]) -> ExperimentConfig:
    """Build a validated config from parsed key-value pairs."""
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    missing = [k for k in REQUIRED_KEYS if k not in raw]
    if missing:
        raise ConfigError(f"missing required config keys: {', '.join(missing)}")
    return ExperimentConfig(**raw)


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse a TOML config file and validate it."""
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}")
    return config_from_mapping(raw)
