import math

import pytest

from fairfedcs.reputation import (
    ReputationRecord,
    init_reputation,
    record_contribution,
    reputation_value,
)


class TestReputationValue:
    def test_fresh_record_is_half(self):
        assert reputation_value(ReputationRecord(client_id=0)) == 0.5

    def test_posterior_mean_formula(self):
        # (a+1)/(a+b+2) for a handful of counter pairs
        assert reputation_value(ReputationRecord(0, 3, 1)) == pytest.approx(4 / 6)
        assert reputation_value(ReputationRecord(0, 0, 5)) == pytest.approx(1 / 7)
        assert reputation_value(ReputationRecord(0, 10, 0)) == pytest.approx(11 / 12)

    def test_value_stays_strictly_inside_unit_interval(self):
        for a in range(0, 50, 7):
            for b in range(0, 50, 7):
                v = reputation_value(ReputationRecord(0, a, b))
                assert 0.0 < v < 1.0

    def test_monotone_in_positive_count(self):
        values = [reputation_value(ReputationRecord(0, a, 3)) for a in range(10)]
        assert values == sorted(values)


class TestRecordContribution:
    def test_positive_score_increments_positive_counter(self):
        rec = record_contribution(ReputationRecord(0), 0.2)
        assert (rec.positive_count, rec.negative_count) == (1, 0)

    def test_negative_score_increments_negative_counter(self):
        rec = record_contribution(ReputationRecord(0), -1e-9)
        assert (rec.positive_count, rec.negative_count) == (0, 1)

    def test_zero_counts_as_positive(self):
        rec = record_contribution(ReputationRecord(0), 0.0)
        assert (rec.positive_count, rec.negative_count) == (1, 0)

    def test_input_record_is_not_mutated(self):
        rec = ReputationRecord(0, 2, 2)
        record_contribution(rec, 1.0)
        assert (rec.positive_count, rec.negative_count) == (2, 2)

    def test_sequence_of_scores(self):
        rec = ReputationRecord(7)
        for score in (0.2, -0.1, 0.0, 0.3):
            rec = record_contribution(rec, score)
        assert (rec.positive_count, rec.negative_count) == (3, 1)
        assert reputation_value(rec) == pytest.approx(4 / 6)
        assert rec.client_id == 7

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_non_finite_score_rejected(self, bad):
        with pytest.raises(ValueError):
            record_contribution(ReputationRecord(0), bad)


class TestInitReputation:
    def test_table_shape_and_ids(self):
        table = init_reputation(5)
        assert [rec.client_id for rec in table] == [0, 1, 2, 3, 4]
        assert all(reputation_value(rec) == 0.5 for rec in table)

    def test_rejects_empty_table(self):
        with pytest.raises(ValueError):
            init_reputation(0)

    def test_rejects_negative_counters(self):
        with pytest.raises(ValueError):
            ReputationRecord(0, -1, 0)
        with pytest.raises(ValueError):
            ReputationRecord(0, 0, -1)
