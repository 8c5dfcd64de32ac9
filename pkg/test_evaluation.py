"""Tests for ranking metrics, F1, case studies, model bundles and report files"""

import math

import numpy as np
import pandas as pd
import pytest

from conftest import make_creative
from engine import BlockWidths, build_model_spec, init_state
from evaluation import (
    AblationRow,
    EvalReport,
    ablation_trend,
    actual_discontinuation_order,
    case_study_ratios,
    ci_reports,
    concordance,
    concordance_index,
    cpa_ratio,
    discontinued_by,
    f1_at_horizon,
    f1_score,
    long_term_case_study,
    ndcg_order,
    predicted_days,
    predicted_discontinuation_order,
    short_term_case_study,
    summary_text,
    top_sales_slice,
    write_reports,
)
from evaluation.case_studies import checkpoint_frame, checkpoint_reports, rule_order, sales_to_date, short_case_reports
from evaluation.modeling import ModelBundle, check_compatible, load_bundle, save_bundle, snap_to_interval
from evaluation.offline import ablation_reports
from evaluation.predictions import predict_records, read_predictions, write_predictions
from evaluation.report import REPORT_COLUMNS
from features import DatasetMetadata
from survival.grid import LONG_GRID, SHORT_GRID
from utils.errors import ContractViolation, UndefinedMetricError


def brute_force_ci(risks, times, events):
    concordant = ties = pairs = 0.0
    for i in range(len(times)):
        if not events[i]:
            continue
        for j in range(len(times)):
            if times[j] > times[i] or (times[j] == times[i] and not events[j]):
                pairs += 1
                if risks[i] > risks[j]:
                    concordant += 1
                elif risks[i] == risks[j]:
                    ties += 1
    return (concordant + 0.5 * ties) / pairs if pairs else None


def make_metadata(text_dim=4, image_dim=4, vocab=None):
    return DatasetMetadata(
        text_dim=text_dim,
        image_dim=image_dim,
        block_widths={},
        genre_vocabulary=vocab or {"games": 1},
        p95_impressions=1000.0,
        splits={"train": ["camp1"], "validation": [], "test": []},
        split_sizes={"train": 1, "validation": 0, "test": 0},
        config_fingerprint="abc",
        seed=0,
    )


class TestConcordance:
    @pytest.mark.parametrize("case", range(100))
    def test_matches_brute_force(self, case):
        rng = np.random.default_rng([case, 17])
        n = int(rng.integers(2, 30))
        times = rng.integers(1, 8, n).astype(float)
        events = rng.random(n) < 0.7
        risks = rng.integers(0, 5, n).astype(float)
        expected = brute_force_ci(risks, times, events)
        if expected is None:
            with pytest.raises(UndefinedMetricError):
                concordance_index(risks, times, events)
        else:
            assert concordance_index(risks, times, events) == pytest.approx(expected, abs=1e-12)

    def test_random_scores_near_half(self):
        rng = np.random.default_rng(0)
        n = 10000
        ci = concordance_index(rng.random(n), rng.exponential(10, n), rng.random(n) < 0.8)
        assert ci == pytest.approx(0.5, abs=0.02)

    def test_perfect_and_reversed(self):
        times = np.arange(1, 11, dtype=float)
        events = np.ones(10, dtype=bool)
        assert concordance_index(-times, times, events) == 1.0
        assert concordance_index(times, times, events) == 0.0

    def test_pair_counts(self):
        result = concordance([3.0, 2.0, 2.0], [1.0, 2.0, 3.0], [True, True, False])
        assert (result.concordant, result.tied, result.pairs) == (2, 1, 3)
        assert result.ci == pytest.approx(2.5 / 3)

    def test_event_tied_with_censored_lifetime_is_comparable(self):
        result = concordance([2.0, 1.0], [3.0, 3.0], [True, False])
        assert result.pairs == 1 and result.ci == 1.0

    @pytest.mark.parametrize("seed", range(10))
    def test_invariant_under_increasing_transform(self, seed):
        rng = np.random.default_rng(seed)
        risks = rng.random(40)
        times = rng.integers(1, 20, 40).astype(float)
        events = rng.random(40) < 0.6
        events[0] = True
        ci = concordance_index(risks, times, events)
        assert concordance_index(3 * risks + 1, times, events) == pytest.approx(ci, abs=1e-12)
        assert concordance_index(np.exp(risks), times, events) == pytest.approx(ci, abs=1e-12)

    def test_no_admissible_pairs(self):
        with pytest.raises(UndefinedMetricError):
            concordance_index([1.0, 2.0], [5.0, 5.0], [True, True])

    def test_shape_mismatch(self):
        with pytest.raises(ContractViolation):
            concordance_index([1.0], [1.0, 2.0], [True, True])


class TestNdcg:
    @pytest.mark.parametrize("case", range(50))
    def test_identical_order(self, case):
        rng = np.random.default_rng(case)
        order = [f"c{i}" for i in rng.permutation(int(rng.integers(1, 40)))]
        assert ndcg_order(order, order) == pytest.approx(1.0)

    def test_reversed_three(self):
        assert ndcg_order(["c", "b", "a"], ["a", "b", "c"]) == pytest.approx(0.7900, abs=1e-4)

    @pytest.mark.parametrize("seed", range(10))
    def test_relabelling_ids_keeps_the_score(self, seed):
        rng = np.random.default_rng(seed)
        actual = [f"c{i}" for i in range(12)]
        predicted = [actual[i] for i in rng.permutation(12)]
        names = {c: f"x{k}" for c, k in zip(actual, rng.permutation(12))}
        relabelled = ndcg_order([names[c] for c in predicted], [names[c] for c in actual])
        assert relabelled == pytest.approx(ndcg_order(predicted, actual), abs=1e-12)

    def test_not_a_permutation(self):
        with pytest.raises(ContractViolation):
            ndcg_order(["a", "b"], ["a", "c"])
        with pytest.raises(ContractViolation):
            ndcg_order([], [])


class TestOrders:
    def test_predicted_order(self):
        hazards = np.array([
            [0.95, 0.1, 0.1, 0.1],
            [0.99, 0.1, 0.1, 0.1],
            [0.10, 0.2, 0.3, 0.4],
            [0.10, 0.91, 0.1, 0.1],
            [0.10, 0.2, 0.3, 0.8],
        ])
        order = predicted_discontinuation_order(["a", "b", "c", "d", "e"], hazards, 0.9)
        assert order == ["b", "a", "d", "e", "c"]

    @pytest.mark.parametrize("seed", range(5))
    def test_predicted_order_ignores_input_order(self, seed):
        rng = np.random.default_rng(seed)
        ids = [f"c{i}" for i in range(15)]
        hazards = rng.random((15, 4))
        hazards[:3] = 0.5
        order = predicted_discontinuation_order(ids, hazards)
        shuffle = rng.permutation(15)
        assert predicted_discontinuation_order([ids[i] for i in shuffle], hazards[shuffle]) == order
        assert sorted(order) == sorted(ids)

    def test_actual_order_puts_censored_last(self):
        creatives = [
            make_creative("a", lifetime=5.0, censored=True),
            make_creative("b", lifetime=8.0),
            make_creative("c", lifetime=2.0),
            make_creative("d", lifetime=2.0),
        ]
        assert actual_discontinuation_order(creatives) == ["c", "d", "b", "a"]

    def test_top_sales_slice(self):
        creatives = [make_creative(f"c{i}", total_sales=s) for i, s in enumerate([5.0, 50.0, 20.0, 50.0, 1.0])]
        assert [c.creative_id for c in top_sales_slice(creatives, 0.25)] == ["c1", "c3"]


class TestF1:
    def test_values(self):
        result = f1_score([1, 1, 0, 0], [1, 0, 1, 0])
        assert (result.tp, result.fp, result.fn) == (1, 1, 1)
        assert result.f1 == pytest.approx(0.5)
        assert not result.undefined

    def test_perfect(self):
        assert f1_score([1, 0, 1], [1, 0, 1]).f1 == 1.0

    def test_no_positive_predictions_flagged(self):
        result = f1_score([0, 0], [1, 0])
        assert result.f1 == 0.0 and result.undefined

    def test_discontinued_by(self):
        np.testing.assert_array_equal(discontinued_by(SHORT_GRID, [0, 1, 2, 4], 3), [False, True, False, False])
        np.testing.assert_array_equal(discontinued_by(LONG_GRID, [1, 2, 5], 30), [True, True, False])

    def test_at_horizon_ignores_censored_lifetimes(self):
        result = f1_at_horizon(SHORT_GRID, [1, 2, 0, 4], [2.0, 3.0, 2.5, 8.0], [False, False, True, False], 3)
        assert (result.tp, result.fp, result.fn) == (1, 0, 1)
        assert result.f1 == pytest.approx(2 / 3)


class TestCpaRatio:
    def test_at_target(self):
        creative = make_creative(rows=[(1000, 10, 5, 50.0)], target_cpa=10.0)
        assert cpa_ratio(creative, 1) == 1.0

    def test_no_spend_and_no_conversions(self):
        assert cpa_ratio(make_creative(rows=[(0, 0, 0, 0.0)]), 1) == 0.0
        assert cpa_ratio(make_creative(rows=[(100, 4, 0, 7.0)]), 1) == math.inf

    @pytest.mark.parametrize("scale", [0.5, 3.0, 10.0])
    def test_scaling_spend_and_target_together(self, scale):
        rows = [(1000, 10, 3, 45.0), (800, 6, 2, 30.0)]
        base = cpa_ratio(make_creative(rows=rows, target_cpa=10.0), 2)
        scaled_rows = [(i, c, v, s * scale) for i, c, v, s in rows]
        assert cpa_ratio(make_creative(rows=scaled_rows, target_cpa=10.0 * scale), 2) == pytest.approx(base)
        assert base == pytest.approx(1.5)


CASE_ROWS = ((100, 10, 2, 20.0),) + ((100, 10, 0, 20.0),) * 4


class TestShortCaseStudy:
    def test_predicted_days(self):
        np.testing.assert_array_equal(predicted_days(SHORT_GRID, [0, 1, 4]), [math.inf, 3.0, 10.0])

    def test_early_stop_lowers_the_ratio(self):
        creative = make_creative(rows=CASE_ROWS, target_cpa=10.0)
        hazards = np.array([[0.95, 0.1, 0.1, 0.1]])
        result = short_term_case_study([creative], hazards)
        assert result.model.mean == pytest.approx(3.0)
        assert result.human.mean == pytest.approx(5.0)

    def test_late_prediction_uses_the_actual_day(self):
        creative = make_creative(rows=CASE_ROWS, target_cpa=10.0)
        result = case_study_ratios([creative], [math.inf])
        assert result.model == result.human

    def test_infinite_ratios_are_counted_apart(self):
        creatives = [make_creative("a", rows=CASE_ROWS), make_creative("b", rows=[(100, 4, 0, 7.0)])]
        result = case_study_ratios(creatives, [math.inf, math.inf])
        assert result.human.n_finite == 1 and result.human.n_infinite == 1
        reports = short_case_reports(result, model="case")
        inf_rows = [r for r in reports if r.metric == "cpa-ratio-inf"]
        assert [r.value for r in inf_rows] == [1.0, 1.0]
        assert {r.slice for r in reports} == {"model", "human"}


class TestLongCaseStudy:
    def _population(self):
        lifetimes = {"a": 15.0, "b": 25.0, "c": 35.0, "d": 5.0}
        return [make_creative(k, lifetime=v) for k, v in lifetimes.items()]

    def test_matching_model_order_scores_one(self):
        creatives = self._population()
        hazards = np.array([
            [0.1, 0.95, 0.1, 0.1, 0.1],
            [0.1, 0.1, 0.95, 0.1, 0.1],
            [0.1, 0.1, 0.1, 0.95, 0.1],
            [0.99, 0.1, 0.1, 0.1, 0.1],
        ])
        scores = long_term_case_study(creatives, hazards)
        assert sorted({s.day for s in scores}) == [10, 20, 30]
        model = [s for s in scores if s.method == "model"]
        assert [s.n for s in model] == [3, 2, 1]
        assert all(s.ndcg == pytest.approx(1.0) for s in model)

    def test_empty_checkpoints_are_skipped(self):
        creatives = self._population()
        scores = long_term_case_study(creatives, np.full((4, 5), 0.5), last_day=50)
        skipped = [s for s in scores if s.skipped]
        assert {s.day for s in skipped} == {40, 50}
        assert all(math.isnan(s.ndcg) for s in skipped)
        assert {r.flag for r in checkpoint_reports(skipped)} == {"skipped"}

    def test_checkpoint_frame(self):
        scores = long_term_case_study(self._population(), np.full((4, 5), 0.5))
        frame = checkpoint_frame(scores)
        assert list(frame.columns) == ["checkpoint_day", "method", "ndcg", "n"]
        assert len(frame) == 9

    def test_rule_orders(self):
        creatives = [
            make_creative("a", rows=[(100, 10, 1, 10.0)], total_sales=100.0),
            make_creative("b", rows=[(100, 10, 1, 30.0)], total_sales=300.0),
        ]
        assert rule_order(creatives, 1, "sales-order") == ["b", "a"]
        assert rule_order(creatives, 1, "cpa-ratio-order") == ["b", "a"]

    def test_sales_to_date_is_prorated(self):
        creative = make_creative(rows=[(100, 10, 1, 10.0), (100, 10, 3, 10.0)], total_sales=80.0)
        assert sales_to_date(creative, 1) == pytest.approx(20.0)
        assert sales_to_date(creative, 2) == pytest.approx(80.0)


class TestOfflineReports:
    def test_ci_reports_per_slice(self):
        creatives = [make_creative(f"c{i}", lifetime=float(i + 1), total_sales=float(i)) for i in range(4)]
        hazards = np.tile(np.linspace(0.9, 0.1, 4)[:, None], (1, 4))
        reports = ci_reports({"short": hazards}, creatives, fraction=0.25, model="m")
        overall, top = reports
        assert overall.slice == "all" and overall.value == 1.0 and overall.n == 6
        assert top.slice == "top-25%-sales" and top.flag == "undefined" and math.isnan(top.value)

    def test_ablation_trend(self):
        rising = [AblationRow(d, 0.6 + 0.01 * d, 0.7 + 0.02 * d) for d in range(4)]
        assert ablation_trend(rising) == {"short": pytest.approx(1.0), "long": pytest.approx(1.0)}
        flat = [AblationRow(d, 0.6, 0.6) for d in range(3)]
        assert all(math.isnan(v) for v in ablation_trend(flat).values())
        spearman = [r for r in ablation_reports(rising) if r.metric == "spearman"]
        assert [r.slice for r in spearman] == ["days-vs-ci", "days-vs-ci"]

    def test_regression_snapping(self):
        np.testing.assert_array_equal(snap_to_interval(SHORT_GRID, [-1.0, 2.0, 10.0, 11.0]), [1, 1, 4, 0])


class TestModelBundles:
    def _bundle(self, task_mode="multi-task", **kwargs):
        spec = build_model_spec(task_mode, BlockWidths(text=4, image=4), genre_cardinality=2, **kwargs)
        return ModelBundle(spec=spec, state=init_state(spec, 0), days_used=2, vocab={"games": 1}, text_dim=4, image_dim=4)

    def test_round_trip(self, tmp_path):
        bundle = self._bundle()
        loaded = load_bundle(save_bundle(tmp_path / "model.json", bundle, "fp"))
        assert loaded.spec == bundle.spec and loaded.state.equals(bundle.state)
        assert (loaded.days_used, loaded.vocab, loaded.text_dim) == (2, {"games": 1}, 4)

    def test_incompatible_dataset(self):
        bundle = self._bundle()
        check_compatible(bundle, make_metadata())
        with pytest.raises(ContractViolation, match="image"):
            check_compatible(bundle, make_metadata(image_dim=5))
        with pytest.raises(ContractViolation, match="genre"):
            check_compatible(bundle, make_metadata(vocab={"games": 1, "travel": 2}))

    def test_prediction_records(self, tmp_path):
        creatives = [make_creative(f"c{i}", rows=((100, 5, 1, 5.0),) * (i + 1), seed=i) for i in range(3)]
        records = predict_records(self._bundle(), creatives, threshold=0.9)
        assert [r.as_of_day for r in records] == [1, 2, 2]
        assert set(records[0].hazards) == {"short", "long", "overall"}
        assert len(records[0].hazards["overall"]) == 8
        write_predictions(tmp_path / "p.jsonl", records)
        assert read_predictions(tmp_path / "p.jsonl") == records

    def test_classification_and_regression_records(self):
        creatives = [make_creative(rows=((100, 5, 1, 5.0),) * 3)]
        classified = predict_records(self._bundle("classification", horizon=7), creatives)[0]
        assert classified.hazards == {} and 0 <= classified.probability <= 1 and classified.horizon == 7.0
        regressed = predict_records(self._bundle("regression", regression_term="long"), creatives)[0]
        assert regressed.predicted_day is not None and "long" in regressed.predicted_interval


class TestReportFiles:
    def test_csv_columns_and_summary(self, tmp_path):
        reports = [
            EvalReport(metric="ci", value=0.75, n=10, grid="short", model="m"),
            EvalReport(metric="ci", value=math.nan, grid="long", flag="undefined"),
        ]
        path = write_reports(tmp_path / "ci.csv", reports)
        frame = pd.read_csv(path)
        assert tuple(frame.columns) == REPORT_COLUMNS
        assert frame["value"].iloc[0] == pytest.approx(0.75)
        text = summary_text("CI", reports)
        assert "n/a" in text and "[undefined]" in text

    def test_rewrite_is_byte_identical(self, tmp_path):
        reports = [EvalReport(metric="ndcg", value=1 / 3, n=3)]
        first = write_reports(tmp_path / "a.csv", reports).read_bytes()
        assert write_reports(tmp_path / "a.csv", reports).read_bytes() == first
