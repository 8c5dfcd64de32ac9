"""Assembling creatives into model inputs and training targets"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from config.settings import IMPRESSION_PERCENTILE, STAT_FEATURE_COUNT
from engine.batch import FeatureBatch, HeadTargets, TrainingSet
from engine.network import recurrent_encode
from engine.spec import BlockWidths, ModelSpec
from engine.state import ModelState
from features.categorical import encode_categorical, gender_one_hot, genre_index
from features.records import AdCreative
from features.series import build_series_inputs
from features.statistical import cumulative_totals, encode_statistical
from survival.labels import label_arrays
from utils.errors import DomainError

MASK_BLOCKS = ("text", "image", "stats", "series")


@dataclass(frozen=True)
class FeatureMask:
    """Which optional blocks feed the model; the categorical block is always on"""
    text: bool = True
    image: bool = True
    stats: bool = True
    series: bool = True

    @classmethod
    def from_names(cls, names: Iterable[str]) -> "FeatureMask":
        names = set(names)
        unknown = names - set(MASK_BLOCKS)
        if unknown:
            raise DomainError(f"unknown feature blocks {sorted(unknown)}")
        return cls(**{block: block in names for block in MASK_BLOCKS})

    @classmethod
    def from_blocks(cls, blocks: BlockWidths) -> "FeatureMask":
        return cls(text=blocks.text > 0, image=blocks.image > 0, stats=blocks.stats > 0, series=blocks.series > 0)

    @property
    def enabled(self) -> List[str]:
        return [block for block in MASK_BLOCKS if getattr(self, block)]

    @property
    def label(self) -> str:
        """Row label such as 'stats+text'; 'all' when every block is on"""
        if len(self.enabled) == len(MASK_BLOCKS):
            return "all"
        order = ("stats", "text", "image", "series")
        return "+".join(block for block in order if getattr(self, block)) or "categorical"

    def block_widths(self, text_dim: int, image_dim: int) -> BlockWidths:
        defaults = BlockWidths()
        return BlockWidths(
            text=text_dim if self.text else 0,
            gender=defaults.gender,
            genre=defaults.genre,
            image=image_dim if self.image else 0,
            stats=STAT_FEATURE_COUNT if self.stats else 0,
            series=defaults.series if self.series else 0,
        )


@dataclass(frozen=True)
class FeatureVector:
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    e4_stat: np.ndarray
    e4_series: np.ndarray

    @property
    def assembled(self) -> np.ndarray:
        return np.concatenate([self.e1, self.e2, self.e3, self.e4_stat, self.e4_series])

    @property
    def width(self) -> int:
        return int(self.assembled.shape[0])


def _check_day(creative: AdCreative, day: int):
    if day < 1:
        raise DomainError(f"as-of day must be >= 1, got {day}")
    if day > creative.days_available:
        raise DomainError(
            f"creative '{creative.creative_id}' has {creative.days_available} daily records, requested day {day}"
        )


def assemble(
    creative: AdCreative,
    day: int,
    spec: ModelSpec,
    state: ModelState,
    vocab: Dict[str, int],
) -> FeatureVector:
    """e1 || e2 || e3 || e4_stat || e4_series for one creative as of a day

    Block widths follow the model spec; disabled blocks are empty. Only
    daily rows with day <= the as-of day are read.
    """
    _check_day(creative, day)
    blocks = spec.blocks
    empty = np.zeros(0)
    if blocks.genre:
        e2 = encode_categorical(creative.gender, creative.genre, vocab, state.params["genre_embedding"])
    else:
        e2 = gender_one_hot(creative.gender)
    series = (
        recurrent_encode(state, build_series_inputs(creative.daily, day)) if spec.has_series else empty
    )
    return FeatureVector(
        e1=np.asarray(creative.text_embedding, dtype=float) if blocks.text else empty,
        e2=e2,
        e3=np.asarray(creative.image_embedding, dtype=float) if blocks.image else empty,
        e4_stat=encode_statistical(creative.daily, day) if blocks.stats else empty,
        e4_series=series,
    )


def as_of_day(creative: AdCreative, days_used: int) -> int:
    """Requested as-of day clipped to the creative's available records (at least day 1)"""
    return max(1, min(days_used, creative.days_available))


def encode_batch(
    creatives: Sequence[AdCreative],
    days_used: int,
    vocab: Dict[str, int],
    mask: FeatureMask,
    text_dim: int,
    image_dim: int,
) -> FeatureBatch:
    """Raw feature blocks for many creatives; days_used = 0 means no series and day-1 statistics"""
    if days_used < 0:
        raise DomainError(f"days_used must be >= 0, got {days_used}")
    n = len(creatives)
    use_series = mask.series and days_used > 0
    days = [as_of_day(creative, days_used) for creative in creatives]
    longest = max(days) if (n and use_series) else 0

    text = np.zeros((n, text_dim if mask.text else 0))
    image = np.zeros((n, image_dim if mask.image else 0))
    stats = np.zeros((n, STAT_FEATURE_COUNT if mask.stats else 0))
    gender = np.zeros((n, 3))
    genre = np.zeros(n, dtype=int)
    series = np.zeros((n, longest, 2))
    lengths = np.zeros(n, dtype=int)

    for i, (creative, day) in enumerate(zip(creatives, days)):
        if mask.text:
            text[i] = creative.text_embedding
        if mask.image:
            image[i] = creative.image_embedding
        if mask.stats:
            stats[i] = encode_statistical(creative.daily, day)
        gender[i] = gender_one_hot(creative.gender)
        genre[i] = genre_index(creative.genre, vocab)
        if use_series:
            series[i, :day] = build_series_inputs(creative.daily, day)
            lengths[i] = day

    return FeatureBatch(
        text=text, gender=gender, genre=genre, image=image, stats=stats, series=series, lengths=lengths
    )


def impression_percentile(creatives: Sequence[AdCreative], percentile: float = IMPRESSION_PERCENTILE) -> float:
    totals = [cumulative_totals(creative.daily)[0] for creative in creatives]
    return float(np.percentile(totals, percentile)) if totals else 0.0


def impression_weight(creative: AdCreative, p95: float) -> float:
    """min(total impressions / p95, 1); 0 when the normalizer is 0"""
    if p95 <= 0:
        return 0.0
    return float(min(cumulative_totals(creative.daily)[0] / p95, 1.0))


def weighting_ratios(creatives: Sequence[AdCreative], mode: str, p95: Optional[float] = None) -> np.ndarray:
    """Per-creative r for the (r + 1) loss factor: lifetime CTR, or the impression ratio"""
    if mode == "impression":
        return np.array([impression_weight(creative, p95 or 0.0) for creative in creatives])
    ratios = []
    for creative in creatives:
        impressions, clicks, _, _ = cumulative_totals(creative.daily)
        ratios.append(clicks / impressions if impressions > 0 else 0.0)
    return np.array(ratios)


def head_targets(spec: ModelSpec, creatives: Sequence[AdCreative]) -> Dict[str, HeadTargets]:
    """Event targets for hazard heads, a binary label for classification, clipped day for regression"""
    lifetimes = np.array([creative.lifetime_days for creative in creatives], dtype=float)
    censored = np.array([creative.censored for creative in creatives], dtype=bool)
    n = len(creatives)
    targets = {}
    for head in spec.heads:
        if head.is_hazard:
            delta, observed = label_arrays(head.grid, lifetimes, censored)
            targets[head.name] = HeadTargets(delta=delta, observed=observed)
        elif head.horizon is not None:
            label = (~censored & (lifetimes <= head.horizon)).astype(float)
            targets[head.name] = HeadTargets(delta=label[:, None], observed=np.ones((n, 1)))
        else:
            upper = head.bounds[-1]
            targets[head.name] = HeadTargets(value=(np.minimum(lifetimes, upper) / upper)[:, None])
    return targets


def build_training_set(
    spec: ModelSpec,
    creatives: Sequence[AdCreative],
    days_used: int,
    vocab: Dict[str, int],
    mask: FeatureMask,
    text_dim: int,
    image_dim: int,
    weighting_mode: str = "none",
    p95: Optional[float] = None,
) -> TrainingSet:
    features = encode_batch(creatives, days_used, vocab, mask, text_dim, image_dim)
    return TrainingSet(
        features=features,
        targets=head_targets(spec, creatives),
        ratios=weighting_ratios(creatives, weighting_mode, p95),
    )
