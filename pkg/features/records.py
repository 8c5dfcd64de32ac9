"""Creative and daily-performance records, with JSONL and CSV storage"""

import math
from pathlib import Path
from typing import Dict, Iterable, List, Literal, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config.settings import DAILY_CSV_COLUMNS
from storage.files import atomic_write, atomic_write_text
from utils.errors import ContractViolation


class DailyPerformance(BaseModel):
    """One day of serving counts for a creative"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    day: int = Field(ge=1)
    impressions: int = Field(ge=0)
    clicks: int = Field(ge=0)
    conversions: int = Field(ge=0)
    spend: float = Field(ge=0)

    @model_validator(mode="after")
    def _check_funnel(self):
        if not self.conversions <= self.clicks <= self.impressions:
            raise ValueError("expected 0 <= conversions <= clicks <= impressions")
        return self


class AdCreative(BaseModel):
    """A served ad creative: content embeddings, targeting, daily counts and outcome"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    creative_id: str
    campaign_id: str
    gender: Literal["all", "male", "female"]
    genre: str
    target_cpa: float = Field(gt=0)
    text_embedding: List[float]
    image_embedding: List[float]
    daily: List[DailyPerformance] = Field(min_length=1)
    lifetime_days: float = Field(gt=0)
    censored: bool = False
    total_sales: float = Field(ge=0)

    @field_validator("text_embedding", "image_embedding")
    @classmethod
    def _finite(cls, values: List[float]) -> List[float]:
        if not all(math.isfinite(v) for v in values):
            raise ValueError("embeddings must be finite")
        return values

    @model_validator(mode="after")
    def _check_daily(self):
        for expected, row in enumerate(self.daily, start=1):
            if row.day != expected:
                raise ValueError(f"daily rows must be contiguous from day 1 (found day {row.day} at position {expected})")
        if len(self.daily) > math.ceil(self.lifetime_days):
            raise ValueError("creative has more daily rows than its lifetime")
        return self

    @property
    def days_available(self) -> int:
        return len(self.daily)

    def daily_matrix(self) -> np.ndarray:
        """(days, 4) array of impressions, clicks, conversions, spend"""
        return np.array(
            [[row.impressions, row.clicks, row.conversions, row.spend] for row in self.daily],
            dtype=float,
        )


# JSONL

def write_creatives(path: Union[str, Path], creatives: Iterable[AdCreative]) -> Path:
    lines = [creative.model_dump_json() for creative in creatives]
    return atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))


def read_creatives(path: Union[str, Path]) -> List[AdCreative]:
    creatives = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                creatives.append(AdCreative.model_validate_json(line))
    return creatives


# CSV alternative for daily rows

def daily_frame(creatives: Iterable[AdCreative]) -> pd.DataFrame:
    rows = [
        {"creative_id": creative.creative_id, **row.model_dump()}
        for creative in creatives
        for row in creative.daily
    ]
    return pd.DataFrame(rows, columns=list(DAILY_CSV_COLUMNS))


def write_daily_csv(path: Union[str, Path], creatives: Iterable[AdCreative]) -> Path:
    frame = daily_frame(creatives)
    return atomic_write(path, lambda tmp: frame.to_csv(tmp, index=False))


def read_daily_csv(path: Union[str, Path]) -> Dict[str, List[DailyPerformance]]:
    frame = pd.read_csv(path, dtype={"creative_id": str})
    missing = set(DAILY_CSV_COLUMNS) - set(frame.columns)
    if missing:
        raise ContractViolation(f"daily CSV is missing columns {sorted(missing)}")
    frame = frame.sort_values(["creative_id", "day"], kind="stable")
    daily: Dict[str, List[DailyPerformance]] = {}
    for creative_id, group in frame.groupby("creative_id", sort=True):
        daily[str(creative_id)] = [
            DailyPerformance(
                day=int(row.day),
                impressions=int(row.impressions),
                clicks=int(row.clicks),
                conversions=int(row.conversions),
                spend=float(row.spend),
            )
            for row in group.itertuples(index=False)
        ]
    return daily


def with_daily(creatives: Iterable[AdCreative], daily: Dict[str, List[DailyPerformance]]) -> List[AdCreative]:
    """Replace each creative's daily rows with the ones loaded from CSV"""
    result = []
    for creative in creatives:
        if creative.creative_id not in daily:
            raise ContractViolation(f"no daily rows for creative '{creative.creative_id}'")
        result.append(AdCreative.model_validate({**creative.model_dump(), "daily": daily[creative.creative_id]}))
    return result
