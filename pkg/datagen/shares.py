"""Lifetime and sales shares per lifetime bucket"""

import math
from typing import Dict, Sequence, Tuple

import numpy as np

from features.records import AdCreative
from utils.errors import DomainError

LIFETIME_BUCKETS: Tuple[Tuple[float, float], ...] = ((0.0, 3.0), (3.0, 7.0), (7.0, math.inf))


def bucket_label(bucket: Tuple[float, float]) -> str:
    low, high = bucket
    upper = "inf" if math.isinf(high) else f"{high:g}"
    return f"[{low:g},{upper})"


def _bucket_masks(creatives: Sequence[AdCreative], buckets) -> Dict[str, np.ndarray]:
    if not creatives:
        raise DomainError("shares need a non-empty dataset")
    lifetimes = np.array([creative.lifetime_days for creative in creatives])
    return {bucket_label(b): (lifetimes >= b[0]) & (lifetimes < b[1]) for b in buckets}


def lifetime_shares(creatives: Sequence[AdCreative], buckets=LIFETIME_BUCKETS) -> Dict[str, float]:
    """Fraction of creatives whose lifetime falls in each [low, high) bucket"""
    masks = _bucket_masks(creatives, buckets)
    return {label: float(mask.mean()) for label, mask in masks.items()}


def sales_share(creatives: Sequence[AdCreative], buckets=LIFETIME_BUCKETS) -> Dict[str, float]:
    """Fraction of total sales earned by creatives in each lifetime bucket

    With no sales at all the shares fall back to creative counts.
    """
    masks = _bucket_masks(creatives, buckets)
    sales = np.array([creative.total_sales for creative in creatives])
    total = sales.sum()
    if total <= 0:
        return {label: float(mask.mean()) for label, mask in masks.items()}
    return {label: float(sales[mask].sum() / total) for label, mask in masks.items()}
