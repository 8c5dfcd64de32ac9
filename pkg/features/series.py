"""Per-day inputs for the recurrent time-series encoder"""

from typing import Sequence

import numpy as np

from features.records import DailyPerformance
from utils.errors import DomainError


def build_series_inputs(daily: Sequence[DailyPerformance], day: int) -> np.ndarray:
    """(day, 2) array of [log1p(impressions_d), log1p(clicks_d)] for d = 1..day"""
    if day < 1:
        raise DomainError(f"series day must be >= 1, got {day}")
    rows = [row for row in daily if row.day <= day]
    if len(rows) < day:
        raise DomainError(f"requested {day} days of series, only {len(rows)} available")
    return np.log1p(np.array([[row.impressions, row.clicks] for row in rows], dtype=float))
