"""Operational case studies: CPA ratio at discontinuation and ordering agreement"""

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
import pandas as pd

from config.settings import CHECKPOINT_EVERY_DAYS, DISCONTINUATION_THRESHOLD, LONG_CASE_MIN_DAYS
from evaluation.metrics import (
    actual_discontinuation_order,
    cpa_ratio,
    ndcg_order,
    predicted_discontinuation_order,
)
from evaluation.report import EvalReport
from features.records import AdCreative
from features.statistical import cumulative_totals
from survival.grid import SHORT_GRID, TimeGrid
from survival.hazard import first_crossings
from utils.logging import get_logger

logger = get_logger(__name__)

CASE_METHODS = ("model", "sales-order", "cpa-ratio-order")


@dataclass(frozen=True)
class RatioSummary:
    mean: float
    std: float
    n_finite: int
    n_infinite: int

    @classmethod
    def of(cls, ratios: Sequence[float]) -> "RatioSummary":
        ratios = np.asarray(ratios, dtype=float)
        finite = ratios[np.isfinite(ratios)]
        if finite.size == 0:
            return cls(mean=math.nan, std=math.nan, n_finite=0, n_infinite=int(ratios.size))
        return cls(
            mean=float(finite.mean()),
            std=float(finite.std()),
            n_finite=int(finite.size),
            n_infinite=int(ratios.size - finite.size),
        )


@dataclass(frozen=True)
class ShortCaseStudy:
    model: RatioSummary
    human: RatioSummary
    n: int


def predicted_days(grid: TimeGrid, intervals: Sequence[int]) -> np.ndarray:
    """Upper bound day of each predicted interval; +inf for no crossing"""
    intervals = np.asarray(intervals, dtype=int)
    days = np.full(intervals.shape, math.inf)
    crossed = intervals > 0
    days[crossed] = np.asarray(grid.bounds)[intervals[crossed]]
    return days


def case_study_ratios(creatives: Sequence[AdCreative], predicted: Sequence[float]) -> ShortCaseStudy:
    """CPA ratios at min(predicted day, actual day) versus at the actual day

    A prediction after the actual discontinuation yields the actual ratio.
    """
    model, human = [], []
    for creative, day in zip(creatives, predicted):
        actual = creative.lifetime_days
        stop = min(day, actual)
        model.append(cpa_ratio(creative, math.ceil(stop)))
        human.append(cpa_ratio(creative, math.ceil(actual)))
    return ShortCaseStudy(model=RatioSummary.of(model), human=RatioSummary.of(human), n=len(model))


def short_term_case_study(
    creatives: Sequence[AdCreative],
    short_hazards: np.ndarray,
    threshold: float = DISCONTINUATION_THRESHOLD,
) -> ShortCaseStudy:
    """Short-grid hazards predicted from day-1 data, discontinued at the first crossing"""
    days = predicted_days(SHORT_GRID, first_crossings(short_hazards, threshold))
    result = case_study_ratios(creatives, days)
    logger.info(
        f"Short-term case study on {result.n} creatives: model {result.model.mean:.3f}, "
        f"actual {result.human.mean:.3f}"
    )
    return result


@dataclass(frozen=True)
class CheckpointScore:
    day: int
    method: str
    ndcg: float
    n: int
    skipped: bool = False


def sales_to_date(creative: AdCreative, day: int) -> float:
    """Total sales prorated by conversions up to the day"""
    conversions = cumulative_totals(creative.daily)[2]
    if conversions == 0:
        return 0.0
    return creative.total_sales * cumulative_totals(creative.daily, day)[2] / conversions


def rule_order(creatives: Sequence[AdCreative], day: int, method: str) -> List[str]:
    """Descending sales to date, or descending CPA ratio at the day; ties by id"""
    if method == "sales-order":
        key = lambda c: (-sales_to_date(c, day), c.creative_id)
    else:
        key = lambda c: (-cpa_ratio(c, day), c.creative_id)
    return [c.creative_id for c in sorted(creatives, key=key)]


def checkpoint_ndcgs(
    population: Sequence[AdCreative],
    model_order: Callable[[Sequence[AdCreative]], List[str]],
    every: int = CHECKPOINT_EVERY_DAYS,
    last_day: Optional[int] = None,
) -> List[CheckpointScore]:
    """NDCG of the model and both rule orderings at days every, 2*every, ...

    Each checkpoint ranks the creatives still served on that day against
    their actual discontinuation order.
    """
    if last_day is None:
        last_day = int(max((c.lifetime_days for c in population), default=every))
    scores = []
    for day in range(every, last_day + 1, every):
        alive = [c for c in population if c.lifetime_days >= day]
        if not alive:
            logger.info(f"Checkpoint day {day}: no creatives still served, skipped")
            scores.extend(CheckpointScore(day, method, math.nan, 0, skipped=True) for method in CASE_METHODS)
            continue
        actual = actual_discontinuation_order(alive)
        orders = {
            "model": model_order(alive),
            "sales-order": rule_order(alive, day, "sales-order"),
            "cpa-ratio-order": rule_order(alive, day, "cpa-ratio-order"),
        }
        for method in CASE_METHODS:
            scores.append(CheckpointScore(day, method, ndcg_order(orders[method], actual), len(alive)))
    return scores


def long_term_case_study(
    creatives: Sequence[AdCreative],
    long_hazards: np.ndarray,
    threshold: float = DISCONTINUATION_THRESHOLD,
    every: int = CHECKPOINT_EVERY_DAYS,
    min_days: int = LONG_CASE_MIN_DAYS,
    last_day: Optional[int] = None,
) -> List[CheckpointScore]:
    """Long-grid hazards (predicted from the first min_days days) ordered per checkpoint

    Only creatives served for more than min_days take part.
    """
    long_hazards = np.asarray(long_hazards, dtype=float)
    keep = [i for i, c in enumerate(creatives) if c.lifetime_days > min_days]
    population = [creatives[i] for i in keep]
    rows = {creatives[i].creative_id: long_hazards[i] for i in keep}

    def model_order(alive):
        ids = [c.creative_id for c in alive]
        return predicted_discontinuation_order(ids, np.array([rows[i] for i in ids]), threshold)

    return checkpoint_ndcgs(population, model_order, every, last_day)


def short_case_reports(result: ShortCaseStudy, model: str = "", fingerprint: str = "") -> List[EvalReport]:
    """Mean, std and infinite count of CPA ratios for the model and the actual stop days"""
    reports = []
    for who, summary in (("model", result.model), ("human", result.human)):
        for metric, value, n in (
            ("cpa-ratio-mean", summary.mean, summary.n_finite),
            ("cpa-ratio-std", summary.std, summary.n_finite),
            ("cpa-ratio-inf", float(summary.n_infinite), result.n),
        ):
            reports.append(EvalReport(
                metric=metric,
                value=value,
                n=n,
                slice=who,
                grid="short",
                flag="undefined" if math.isnan(value) else "",
                model=model,
                config_fingerprint=fingerprint,
            ))
    return reports


def checkpoint_frame(scores: Sequence[CheckpointScore]) -> pd.DataFrame:
    """Plot-ready NDCG per checkpoint day and method"""
    return pd.DataFrame(
        [{"checkpoint_day": s.day, "method": s.method, "ndcg": s.ndcg, "n": s.n} for s in scores],
        columns=["checkpoint_day", "method", "ndcg", "n"],
    )


def checkpoint_reports(scores: Sequence[CheckpointScore], model: str = "", fingerprint: str = "") -> List[EvalReport]:
    return [
        EvalReport(
            metric=f"ndcg@{s.day}",
            value=s.ndcg,
            n=s.n,
            slice=s.method,
            grid="long",
            flag="skipped" if s.skipped else "",
            model=model,
            config_fingerprint=fingerprint,
        )
        for s in scores
    ]
