"""Statistical block: cumulative counts, rates and CPA as of a day"""

from typing import Optional, Sequence

import numpy as np

from features.records import DailyPerformance
from utils.errors import DomainError

STAT_NAMES = ("log_impressions", "log_clicks", "log_conversions", "ctr", "cvr", "log_cpa")


def _rows_up_to(daily: Sequence[DailyPerformance], day: Optional[int]) -> Sequence[DailyPerformance]:
    if not daily:
        raise DomainError("statistical features need at least one daily record")
    if day is None:
        return daily
    if day < 1:
        raise DomainError(f"day must be >= 1, got {day}")
    return [row for row in daily if row.day <= day]


def cumulative_totals(daily: Sequence[DailyPerformance], day: Optional[int] = None) -> np.ndarray:
    """[impressions, clicks, conversions, spend] summed over days 1..day"""
    rows = _rows_up_to(daily, day)
    totals = np.zeros(4)
    for row in rows:
        totals += (row.impressions, row.clicks, row.conversions, row.spend)
    return totals


def encode_statistical(daily: Sequence[DailyPerformance], day: Optional[int] = None) -> np.ndarray:
    """Six features from cumulative totals: log1p counts, raw CTR/CVR, log1p CPA

    Zero impressions gives CTR 0, zero clicks gives CVR 0, and zero
    conversions makes the CPA fall back to the raw spend.
    """
    impressions, clicks, conversions, spend = cumulative_totals(daily, day)
    ctr = clicks / impressions if impressions > 0 else 0.0
    cvr = conversions / clicks if clicks > 0 else 0.0
    cpa = spend / conversions if conversions > 0 else spend
    return np.array([
        np.log1p(impressions),
        np.log1p(clicks),
        np.log1p(conversions),
        ctr,
        cvr,
        np.log1p(cpa),
    ])
