"""Tests for records, feature blocks, assembly and the leakage guard"""

import itertools
import math

import numpy as np
import pytest
from pydantic import ValidationError

from conftest import make_creative, make_daily
from engine import BlockWidths, build_model_spec, forward_arrays, init_state
from features import (
    AdCreative,
    DailyPerformance,
    FeatureMask,
    as_of_day,
    assemble,
    build_genre_vocabulary,
    build_series_inputs,
    build_training_set,
    encode_batch,
    encode_categorical,
    encode_statistical,
    gender_one_hot,
    head_targets,
    impression_percentile,
    impression_weight,
    read_creatives,
    read_daily_csv,
    weighting_ratios,
    with_daily,
    write_creatives,
    write_daily_csv,
)
from utils.errors import DomainError

TEN_DAYS = tuple((1000 + 10 * d, 20 + d, 2, 30.0 + d) for d in range(10))


class TestRecords:
    def test_funnel_is_enforced(self):
        with pytest.raises(ValidationError):
            DailyPerformance(day=1, impressions=10, clicks=20, conversions=0, spend=1.0)
        with pytest.raises(ValidationError):
            DailyPerformance(day=0, impressions=10, clicks=2, conversions=0, spend=1.0)

    def test_days_must_be_contiguous(self):
        rows = [
            {"day": 1, "impressions": 10, "clicks": 1, "conversions": 0, "spend": 1.0},
            {"day": 3, "impressions": 10, "clicks": 1, "conversions": 0, "spend": 1.0},
        ]
        with pytest.raises(ValidationError):
            AdCreative.model_validate({**make_creative().model_dump(), "daily": rows, "lifetime_days": 5.0})

    def test_rows_cannot_outlive_the_creative(self):
        with pytest.raises(ValidationError):
            make_creative(rows=TEN_DAYS[:4], lifetime=2.5)

    def test_unknown_fields_rejected(self):
        with pytest.raises(ValidationError):
            AdCreative.model_validate({**make_creative().model_dump(), "score": 1.0})

    def test_jsonl_and_csv_storage(self, tmp_path):
        creatives = [make_creative(f"c{i}", rows=TEN_DAYS[: i + 1], seed=i) for i in range(3)]
        write_creatives(tmp_path / "creatives.jsonl", creatives)
        assert read_creatives(tmp_path / "creatives.jsonl") == creatives

        write_daily_csv(tmp_path / "daily.csv", creatives)
        stripped = [c.model_copy(update={"daily": c.daily[:1]}) for c in creatives]
        assert with_daily(stripped, read_daily_csv(tmp_path / "daily.csv")) == creatives


class TestStatisticalBlock:
    def test_cold_start(self):
        features = encode_statistical(make_daily([(0, 0, 0, 0.0)]), 1)
        np.testing.assert_array_equal(features, np.zeros(6))

    def test_rates_and_cpa(self):
        features = encode_statistical(make_daily([(1000, 10, 5, 50.0)]), 1)
        assert features[3] == pytest.approx(0.01)
        assert features[4] == pytest.approx(0.5)
        assert features[5] == pytest.approx(math.log(11))
        assert features[0] == pytest.approx(math.log(1001))

    def test_zero_conversions_fall_back_to_spend(self):
        features = encode_statistical(make_daily([(100, 4, 0, 7.0)]), 1)
        assert features[5] == pytest.approx(math.log(8))

    def test_only_reads_up_to_the_day(self):
        daily = make_daily(TEN_DAYS)
        np.testing.assert_array_equal(encode_statistical(daily, 3), encode_statistical(daily[:3], 3))

    def test_invalid_day(self):
        with pytest.raises(DomainError):
            encode_statistical(make_daily(TEN_DAYS), 0)


class TestCategoricalBlock:
    def test_gender_one_hot(self):
        np.testing.assert_array_equal(gender_one_hot("all"), [1, 0, 0])
        with pytest.raises(DomainError):
            gender_one_hot("unknown")

    def test_unknown_genre_uses_row_zero(self):
        vocab = build_genre_vocabulary(["games", "beauty", "games"])
        assert vocab == {"beauty": 1, "games": 2}
        table = np.arange(9, dtype=float).reshape(3, 3)
        np.testing.assert_array_equal(encode_categorical("male", "travel", vocab, table), [0, 1, 0, 0, 1, 2])
        np.testing.assert_array_equal(encode_categorical("female", "games", vocab, table), [0, 0, 1, 6, 7, 8])


class TestSeriesInputs:
    def test_single_day(self):
        assert build_series_inputs(make_daily(TEN_DAYS), 1).shape == (1, 2)

    def test_zero_days(self):
        np.testing.assert_array_equal(build_series_inputs(make_daily([(0, 0, 0, 0.0)] * 3), 3), np.zeros((3, 2)))

    def test_too_few_rows(self):
        with pytest.raises(DomainError):
            build_series_inputs(make_daily(TEN_DAYS[:2]), 3)


class TestAssemble:
    def _model(self, vocab, dim=16):
        spec = build_model_spec("multi-task", BlockWidths(text=dim, image=dim), genre_cardinality=len(vocab) + 1)
        return spec, init_state(spec, seed=0)

    def test_default_widths(self):
        creative = make_creative(rows=TEN_DAYS, dim=16)
        vocab = build_genre_vocabulary(["games"])
        spec, state = self._model(vocab)
        vector = assemble(creative, 3, spec, state, vocab)
        assert vector.width == 59
        np.testing.assert_array_equal(vector.assembled, assemble(creative, 3, spec, state, vocab).assembled)

    def test_day_beyond_records(self):
        creative = make_creative(rows=TEN_DAYS[:2], dim=16)
        vocab = build_genre_vocabulary(["games"])
        spec, state = self._model(vocab)
        with pytest.raises(DomainError):
            assemble(creative, 3, spec, state, vocab)

    def test_as_of_day_is_clipped(self):
        creative = make_creative(rows=TEN_DAYS[:2])
        assert as_of_day(creative, 5) == 2
        assert as_of_day(creative, 0) == 1

    @pytest.mark.parametrize("enabled", list(itertools.product([False, True], repeat=4)))
    def test_every_feature_mask(self, enabled):
        mask = FeatureMask(*enabled)
        creatives = [make_creative(f"c{i}", rows=TEN_DAYS[: i + 2], seed=i) for i in range(4)]
        vocab = build_genre_vocabulary(["games"])
        spec = build_model_spec("short", mask.block_widths(4, 4), genre_cardinality=2)
        features = encode_batch(creatives, 3, vocab, mask, 4, 4)
        outputs, _ = forward_arrays(spec, init_state(spec, 1), features)
        assert outputs["short"].shape == (4, 4)
        assert spec.input_width == sum(mask.block_widths(4, 4).as_dict().values())

    def test_mask_labels(self):
        assert FeatureMask().label == "all"
        assert FeatureMask.from_names(["stats", "text"]).label == "stats+text"
        with pytest.raises(DomainError):
            FeatureMask.from_names(["audio"])

    def test_day_zero_drops_the_series(self):
        creatives = [make_creative(rows=TEN_DAYS)]
        features = encode_batch(creatives, 0, {"games": 1}, FeatureMask(), 4, 4)
        assert features.series.shape[1] == 0
        np.testing.assert_array_equal(features.stats[0], encode_statistical(creatives[0].daily, 1))


class TestLeakageGuard:
    def test_future_rows_are_never_read(self):
        rng = np.random.default_rng(0)
        vocab = {"games": 1}
        mask = FeatureMask()
        spec = build_model_spec("multi-task", mask.block_widths(4, 4), genre_cardinality=2)
        state = init_state(spec, 5)
        for day in (1, 3, 7):
            clean, poisoned = [], []
            for i in range(6):
                creative = make_creative(f"c{i}", rows=TEN_DAYS, seed=i)
                future = [
                    DailyPerformance.model_construct(
                        day=row.day,
                        impressions=int(rng.integers(-10**9, 10**9)),
                        clicks=10**12,
                        conversions=-7,
                        spend=float("nan"),
                    )
                    for row in creative.daily[day:]
                ]
                clean.append(creative)
                poisoned.append(creative.model_copy(update={"daily": creative.daily[:day] + future}))
            a, _ = forward_arrays(spec, state, encode_batch(clean, day, vocab, mask, 4, 4))
            b, _ = forward_arrays(spec, state, encode_batch(poisoned, day, vocab, mask, 4, 4))
            for head in ("short", "long"):
                np.testing.assert_array_equal(a[head], b[head])


class TestWeightsAndTargets:
    def test_impression_weight(self):
        creative = make_creative(rows=[(500, 5, 1, 5.0)])
        assert impression_weight(creative, 1000.0) == 0.5
        assert impression_weight(creative, 500.0) == 1.0
        assert impression_weight(make_creative(rows=[(0, 0, 0, 0.0)]), 1000.0) == 0.0
        assert impression_weight(creative, 0.0) == 0.0

    def test_ctr_ratio_is_lifetime_ctr(self):
        creative = make_creative(rows=[(1000, 10, 1, 5.0), (1000, 30, 1, 5.0)])
        np.testing.assert_allclose(weighting_ratios([creative], "ctr"), [0.02])

    def test_impression_percentile(self):
        creatives = [make_creative(f"c{i}", rows=[(100 * (i + 1), 1, 0, 1.0)]) for i in range(21)]
        assert impression_percentile(creatives) == pytest.approx(2000.0)

    def test_head_targets(self):
        creatives = [
            make_creative("a", rows=TEN_DAYS[:2], lifetime=2.0),
            make_creative("b", rows=TEN_DAYS, lifetime=40.0),
            make_creative("c", rows=TEN_DAYS[:5], lifetime=5.0, censored=True),
        ]
        classification = build_model_spec("classification", BlockWidths(), 2, horizon=7)
        targets = head_targets(classification, creatives)["horizon_7"]
        np.testing.assert_array_equal(targets.delta[:, 0], [1, 0, 0])

        regression = build_model_spec("regression", BlockWidths(), 2, regression_term="short")
        np.testing.assert_allclose(head_targets(regression, creatives)["days_short"].value[:, 0], [0.2, 1.0, 0.5])

        multi = build_model_spec("multi-task", BlockWidths(), 2)
        short = head_targets(multi, creatives)["short"]
        np.testing.assert_array_equal(short.delta[0], [1, 0, 0, 0])
        np.testing.assert_array_equal(short.observed[1], [1, 1, 1, 1])

    def test_training_set_sizes(self):
        creatives = [make_creative(f"c{i}", rows=TEN_DAYS[: i + 1], seed=i) for i in range(5)]
        spec = build_model_spec("long", FeatureMask().block_widths(4, 4), genre_cardinality=2)
        data = build_training_set(spec, creatives, 3, {"games": 1}, FeatureMask(), 4, 4, "impression", 2000.0)
        assert len(data) == 5 and data.ratios.shape == (5,)
        assert np.all((data.ratios >= 0) & (data.ratios <= 1))
