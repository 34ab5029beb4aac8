import numpy as np
import pytest

from fairfedcs.config import ExperimentConfig
from fairfedcs.experiment import run_experiment
from fairfedcs.metrics import (
    QUALITY_FLOOR,
    jain_fairness_index,
    participation_counts,
    quality_profile,
    stability_statistics,
    summarize,
)
from fairfedcs.simdata import ClientDataProfile


class TestJainFairnessIndex:
    def test_equal_ratios_score_one_exactly(self):
        assert jain_fairness_index(np.array([5, 5, 5, 5]), np.ones(4)) == 1.0
        assert jain_fairness_index(np.array([2, 4]), np.array([1.0, 2.0])) == 1.0

    def test_single_active_client_scores_one_over_n(self):
        assert jain_fairness_index(np.array([7, 0, 0, 0]), np.ones(4)) == 0.25

    def test_one_one_two_ratio_value(self):
        # (1+1+2)^2 / (3 * (1+1+4)) = 16/18
        value = jain_fairness_index(np.array([1, 1, 2]), np.ones(3))
        assert value == pytest.approx(0.888889, abs=1e-6)

    def test_quality_normalization_rewards_matching_participation(self):
        quality = np.array([1.0, 0.5])
        matched = jain_fairness_index(np.array([10, 5]), quality)
        mismatched = jain_fairness_index(np.array([5, 10]), quality)
        assert matched == 1.0
        assert mismatched < 1.0

    def test_rejects_degenerate_inputs(self):
        with pytest.raises(ValueError):
            jain_fairness_index(np.array([1, 1]), np.array([1.0, 0.0]))
        with pytest.raises(ValueError):
            jain_fairness_index(np.array([0, 0]), np.ones(2))


class TestQualityProfile:
    def _profiles(self, noises, n_classes=10):
        return [
            ClientDataProfile(i, n_classes, p, 100) for i, p in enumerate(noises)
        ]

    def test_endpoints_map_to_one_and_floor(self):
        qp = quality_profile(self._profiles([0.0, 0.15, 0.3, 0.45]))
        assert qp.scaled[0] == 1.0
        assert qp.scaled[-1] == QUALITY_FLOOR
        assert np.all(np.diff(qp.scaled) < 0)

    def test_raw_quality_counts_classes_and_clean_fraction(self):
        profiles = [
            ClientDataProfile(0, 10, 0.0, 100),
            ClientDataProfile(1, 9, 0.2, 100),
        ]
        qp = quality_profile(profiles)
        assert qp.raw == pytest.approx([10.0, 7.2])

    def test_constant_population_scales_to_ones(self):
        qp = quality_profile(self._profiles([0.1, 0.1, 0.1]))
        assert qp.scaled.tolist() == [1.0, 1.0, 1.0]


class TestStabilityStatistics:
    def test_worked_example(self):
        queues = np.array([[0.0, 0.0], [0.05, 0.0], [0.0, 0.1]])
        c = np.array([[0.05, 0.0], [0.0, 0.1]])
        x = np.array([[0.0, 1.0], [1.0, 0.0]])
        mean_rate, terminal_ratio = stability_statistics(queues, c, x)
        assert mean_rate == pytest.approx([(0.05 - 1.0) / 2, (0.1 - 1.0) / 2])
        assert terminal_ratio == pytest.approx([0.0, 0.05])

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            stability_statistics(np.zeros((3, 2)), np.zeros((1, 2)), np.zeros((1, 2)))
        with pytest.raises(ValueError):
            stability_statistics(np.zeros((1, 2)), np.zeros((0, 2)), np.zeros((0, 2)))


@pytest.fixture(scope="module")
def run():
    config = ExperimentConfig(
        scenario=1,
        policy="fairfedcs",
        seed=1,
        n_clients=10,
        m=2,
        n_classes=5,
        feature_dim=8,
        samples_per_client=100,
        max_rounds=8,
        patience=8,
    )
    return run_experiment(config)


class TestSummarize:
    def test_report_fields(self, run):
        report = summarize(run)
        assert 0.0 < report.jfi <= 1.0
        assert report.final_accuracy == run.final_accuracy
        assert report.rounds_executed == run.rounds_executed
        assert report.participation.sum() == 2 * run.rounds_executed
        assert report.stability == pytest.approx(run.final_queues / run.rounds_executed)
        assert report.lyapunov_trace.shape == (run.rounds_executed,)

    def test_participation_counts_match_records(self, run):
        counts = participation_counts(run)
        manual = np.zeros(10, dtype=int)
        for rec in run.records:
            manual[rec.selected] += 1
        assert np.array_equal(counts, manual)

    def test_queueless_policy_reports_no_stability(self):
        config = ExperimentConfig(
            scenario=1,
            policy="random",
            seed=1,
            n_clients=10,
            m=2,
            n_classes=5,
            feature_dim=8,
            samples_per_client=100,
            max_rounds=3,
            patience=3,
        )
        report = summarize(run_experiment(config))
        assert report.stability is None
        assert report.lyapunov_trace is None
