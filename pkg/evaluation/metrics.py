"""Ranking and classification metrics for discontinuation predictions"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sklearn.metrics import confusion_matrix, ndcg_score, precision_recall_fscore_support
from sksurv.exceptions import NoComparablePairException
from sksurv.metrics import concordance_index_censored

from config.settings import DISCONTINUATION_THRESHOLD, TOP_SALES_FRACTION
from features.records import AdCreative
from features.statistical import cumulative_totals
from survival.grid import TimeGrid
from survival.hazard import HazardVector, first_crossings
from utils.errors import ContractViolation, DomainError, UndefinedMetricError


@dataclass(frozen=True)
class RankedPrediction:
    creative_id: str
    risk_score: float
    predicted_interval: Optional[int]  # 1-based; None when no interval crosses the threshold
    hazard: HazardVector

    def __post_init__(self):
        if not math.isfinite(self.risk_score):
            raise DomainError(f"risk score of '{self.creative_id}' is not finite")


@dataclass(frozen=True)
class ConcordanceResult:
    ci: float
    concordant: int
    tied: int
    pairs: int


def concordance(risks, times, events) -> ConcordanceResult:
    """Harrell's C with its concordant, risk-tied and comparable pair counts

    A pair is comparable when the shorter lifetime is an observed event; a
    censored lifetime tied with an event counts as the longer one. Risks
    within 1e-8 of each other count as ties and score 0.5.
    """
    risks = np.asarray(risks, dtype=float)
    times = np.asarray(times, dtype=float)
    events = np.asarray(events, dtype=bool)
    if not risks.shape == times.shape == events.shape or risks.ndim != 1:
        raise ContractViolation("risks, times and events must be 1-d arrays of equal length")
    if risks.size < 2 or not events.any():
        raise UndefinedMetricError("no admissible pairs for the concordance index")

    try:
        with np.errstate(invalid="ignore", divide="ignore"):
            ci, concordant, discordant, tied, _ = concordance_index_censored(events, times, risks)
    except NoComparablePairException as e:
        raise UndefinedMetricError("no admissible pairs for the concordance index") from e
    pairs = int(concordant + discordant + tied)
    if pairs == 0 or not math.isfinite(ci):
        raise UndefinedMetricError("no admissible pairs for the concordance index")
    return ConcordanceResult(ci=float(ci), concordant=int(concordant), tied=int(tied), pairs=pairs)


def concordance_index(risks, times, events) -> float:
    """Harrell's C: (concordant + 0.5 * risk ties) / admissible pairs"""
    return concordance(risks, times, events).ci


def ranked_concordance(predictions: Sequence[RankedPrediction], truths: Sequence[Tuple[float, bool]]) -> float:
    """concordance_index over RankedPrediction records and (time, event) truths"""
    if len(predictions) != len(truths):
        raise ContractViolation("predictions and truths differ in length")
    times, events = zip(*truths) if truths else ((), ())
    return concordance_index([p.risk_score for p in predictions], times, events)


def top_sales_slice(creatives: Sequence[AdCreative], fraction: float = TOP_SALES_FRACTION) -> List[AdCreative]:
    """The ceil(fraction * n) creatives with the highest sales; ties by creative_id"""
    if not 0 < fraction <= 1:
        raise DomainError(f"slice fraction must lie in (0, 1], got {fraction}")
    count = math.ceil(fraction * len(creatives))
    ranked = sorted(creatives, key=lambda c: (-c.total_sales, c.creative_id))
    return ranked[:count]


@dataclass(frozen=True)
class F1Result:
    f1: float
    precision: float
    recall: float
    tp: int
    fp: int
    fn: int
    undefined: bool

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.fn


def f1_score(predicted, actual) -> F1Result:
    """F1 of the positive class; undefined precision or recall is reported as 0 and flagged"""
    predicted = np.asarray(predicted, dtype=bool).astype(int)
    actual = np.asarray(actual, dtype=bool).astype(int)
    if predicted.shape != actual.shape:
        raise ContractViolation("predicted and actual labels differ in shape")
    if predicted.size == 0:
        return F1Result(f1=0.0, precision=0.0, recall=0.0, tp=0, fp=0, fn=0, undefined=True)
    _, fp, fn, tp = (int(v) for v in confusion_matrix(actual, predicted, labels=[0, 1]).ravel())
    precision, recall, f1, _ = precision_recall_fscore_support(
        actual, predicted, average="binary", pos_label=1, zero_division=0
    )
    undefined = (tp + fp == 0) or (tp + fn == 0)
    return F1Result(
        f1=float(f1), precision=float(precision), recall=float(recall), tp=tp, fp=fp, fn=fn, undefined=undefined
    )


def discontinued_by(grid: TimeGrid, intervals: Sequence[int], horizon: float) -> np.ndarray:
    """Predicted interval (0 = none) whose upper bound is at most the horizon"""
    intervals = np.asarray(intervals, dtype=int)
    upper = np.asarray(grid.bounds, dtype=float)[np.clip(intervals, 0, grid.L)]
    return (intervals > 0) & (upper <= horizon)


def actually_discontinued_by(lifetimes, censored, horizon: float) -> np.ndarray:
    return ~np.asarray(censored, dtype=bool) & (np.asarray(lifetimes, dtype=float) <= horizon)


def f1_at_horizon(grid: TimeGrid, intervals: Sequence[int], lifetimes, censored, horizon: float) -> F1Result:
    """F1 of "discontinued by the horizon" from predicted first-crossing intervals"""
    return f1_score(discontinued_by(grid, intervals, horizon), actually_discontinued_by(lifetimes, censored, horizon))


def ndcg_order(predicted_order: Sequence[str], actual_order: Sequence[str]) -> float:
    """NDCG of a predicted ordering; relevance is n - rank in the actual ordering"""
    if len(set(actual_order)) != len(actual_order) or sorted(predicted_order) != sorted(actual_order):
        raise ContractViolation("predicted and actual orders must be permutations of the same ids")
    n = len(actual_order)
    if n == 0:
        raise ContractViolation("cannot rank an empty ordering")
    if n == 1:
        return 1.0
    relevance = {creative_id: n - rank for rank, creative_id in enumerate(actual_order)}
    y_true = np.array([[relevance[c] for c in predicted_order]], dtype=float)
    y_score = np.arange(n, 0, -1, dtype=float)[None, :]
    return float(ndcg_score(y_true, y_score))


def predicted_discontinuation_order(
    creative_ids: Sequence[str],
    hazards: np.ndarray,
    threshold: float = DISCONTINUATION_THRESHOLD,
) -> List[str]:
    """Order by first crossing interval, then by hazard there (descending), then id

    Creatives that never cross come last, ordered by their final-interval hazard.
    """
    hazards = np.asarray(hazards, dtype=float)
    if hazards.ndim != 2 or hazards.shape[0] != len(creative_ids):
        raise ContractViolation("need one hazard row per creative")
    if not 0 < threshold < 1:
        raise DomainError(f"threshold must lie in (0, 1), got {threshold}")
    width = hazards.shape[1]
    keys = []
    for creative_id, row, interval in zip(creative_ids, hazards, first_crossings(hazards, threshold)):
        if interval:
            keys.append((int(interval), -row[interval - 1], creative_id))
        else:
            keys.append((width + 1, -row[-1], creative_id))
    return [key[2] for key in sorted(keys)]


def actual_discontinuation_order(creatives: Sequence[AdCreative]) -> List[str]:
    """Ascending lifetime, censored creatives last, ties by id"""
    ranked = sorted(creatives, key=lambda c: (c.censored, c.lifetime_days, c.creative_id))
    return [c.creative_id for c in ranked]


def cpa_ratio(creative: AdCreative, as_of_day: int) -> float:
    """(cumulative spend / cumulative conversions) / target CPA as of a day

    Zero spend gives 0; spend without conversions gives +inf.
    """
    if not creative.target_cpa > 0:
        raise DomainError(f"target CPA must be positive, got {creative.target_cpa}")
    _, _, conversions, spend = cumulative_totals(creative.daily, as_of_day)
    if spend == 0:
        return 0.0
    if conversions == 0:
        return math.inf
    return (spend / conversions) / creative.target_cpa
