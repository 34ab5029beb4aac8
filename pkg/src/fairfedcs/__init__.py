"""Fairness-aware federated client selection: simulator, service, harness."""

from .config import POLICIES, ConfigError, ExperimentConfig, load_config
from .experiment import ExperimentTrace, run_experiment
from .metrics import MetricsReport, jain_fairness_index, summarize

__version__ = "0.1.0"

__all__ = [
    "POLICIES",
    "ConfigError",
    "ExperimentConfig",
    "ExperimentTrace",
    "MetricsReport",
    "jain_fairness_index",
    "load_config",
    "run_experiment",
    "summarize",
    "__version__",
]
