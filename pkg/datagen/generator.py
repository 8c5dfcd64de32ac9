"""Seeded synthetic campaigns with cut-out and wear-out discontinuation

Every creative draws a latent quality. A Gaussian copula ties the quality
to a uniform lifetime draw, so better creatives tend to live longer while
the lifetime mix stays exactly the configured one. The lifetime draw fixes
the expected CPA-ratio trajectory; the oracle discontinues a creative on
the first day its 3-day rolling mean exceeds the CPA threshold. Observed
daily counts are binomial draws around that trajectory.
"""

from dataclasses import dataclass
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.special import ndtr

from config.schema import GeneratorConfig
from config.settings import GENDERS
from features.records import AdCreative, DailyPerformance
from utils.errors import ConfigError
from utils.logging import get_logger

logger = get_logger(__name__)

MECHANISMS = ("cut-out", "wear-out", "censored")
ROLLING_WINDOW = 3
WEAROUT_ONSET_DAY = 10
# Wear-out trajectories are followed up to this multiple of the horizon when not censoring
UNCENSORED_CAP = 10


class OracleTrace(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    creative_id: str
    discontinuation_day: float
    mechanism: Literal["cut-out", "wear-out", "censored"]
    cpa_ratio: List[float]


@dataclass
class GeneratedDataset:
    creatives: List[AdCreative]
    oracle: List[OracleTrace]

    def __len__(self):
        return len(self.creatives)


def rolling_crossing(ratios: np.ndarray, threshold: float, window: int = ROLLING_WINDOW) -> Optional[int]:
    """First day (1-based) whose trailing rolling mean exceeds the threshold"""
    ratios = np.asarray(ratios, dtype=float)
    if ratios.size == 0:
        return None
    cums = np.concatenate([[0.0], np.cumsum(ratios)])
    days = np.arange(1, ratios.size + 1)
    start = np.maximum(days - window, 0)
    means = (cums[days] - cums[start]) / (days - start)
    above = np.nonzero(means > threshold)[0]
    return int(above[0]) + 1 if above.size else None


def _cutout_day(w: float, weights: np.ndarray) -> int:
    cdf = np.cumsum(weights) / np.sum(weights)
    return int(min(np.searchsorted(cdf, w, side="right"), len(weights) - 1)) + 1


def _unit(vector: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(vector)
    return vector / norm if norm > 0 else vector


def _check_feasible(config: GeneratorConfig):
    if config.n_campaigns < 1 or config.creatives_per_campaign[1] < 1:
        raise ConfigError("generator config produces no creatives")
    if config.cutout_fraction > 0 and sum(config.cutout_day_weights) <= 0:
        raise ConfigError("cut-out day weights are all zero")


def _creative(
    rng: np.random.Generator,
    config: GeneratorConfig,
    campaign: dict,
    creative_id: str,
    directions: dict,
):
    theta = config.cpa_threshold
    horizon = config.horizon_days
    rho = config.quality_lifetime_correlation

    z_quality = rng.standard_normal()
    z_life = rho * z_quality + np.sqrt(1.0 - rho * rho) * rng.standard_normal()
    u = float(ndtr(z_life))
    quality = np.exp(config.quality_sigma * z_quality)
    base_ctr = config.base_ctr_median * np.exp(config.base_ctr_sigma * rng.standard_normal())

    if u < config.cutout_fraction:
        mechanism = "cut-out"
        cut_day = _cutout_day(u / config.cutout_fraction, np.asarray(config.cutout_day_weights))
        low = theta * rng.uniform(*config.cutout_ratio)
        ratios = np.where(np.arange(1, cut_day + 1) < cut_day, low, config.cutout_jump * theta)
        decay = 1.0
        lifetime, censored = float(rolling_crossing(ratios, theta)), False
    else:
        mechanism = "wear-out"
        v = (u - config.cutout_fraction) / (1.0 - config.cutout_fraction)
        lo_ratio, hi_ratio = config.wearout_start_ratio
        lo_decay, hi_decay = config.wearout_decay
        start = hi_ratio - (hi_ratio - lo_ratio) * v
        decay = lo_decay + (hi_decay - lo_decay) * v
        span = horizon if config.censor_at_horizon else horizon * UNCENSORED_CAP
        days = np.arange(1, span + 1)
        ratios = theta * start * decay ** (-np.maximum(days - WEAROUT_ONSET_DAY, 0))
        crossing = rolling_crossing(ratios, theta)
        if crossing is None:
            mechanism, lifetime, censored = "censored", float(span), True
        else:
            lifetime, censored = float(crossing), False

    served = int(min(lifetime, horizon))
    days = np.arange(1, served + 1)
    if mechanism == "cut-out":
        ctr = np.full(served, base_ctr * quality * config.cutout_ctr_factor)
    else:
        ctr = base_ctr * quality * decay ** np.maximum(days - WEAROUT_ONSET_DAY, 0)
    ctr = np.clip(ctr, 0.0, 1.0)
    cvr = np.clip(campaign["cpc"] / (ratios[:served] * campaign["target_cpa"]), 0.0, 1.0)

    impressions = rng.poisson(config.daily_impressions_median * campaign["impression_scale"] * quality, size=served)
    clicks = rng.binomial(impressions, ctr)
    conversions = rng.binomial(clicks, cvr)
    spend = np.round(campaign["cpc"] * clicks, 2)

    noise_text = _unit(rng.standard_normal(config.text_dim))
    noise_image = _unit(rng.standard_normal(config.image_dim))
    signal = config.embedding_signal * z_quality

    daily = [
        DailyPerformance(
            day=int(d),
            impressions=int(impressions[i]),
            clicks=int(clicks[i]),
            conversions=int(conversions[i]),
            spend=float(spend[i]),
        )
        for i, d in enumerate(days)
    ]
    creative = AdCreative(
        creative_id=creative_id,
        campaign_id=campaign["campaign_id"],
        gender=campaign["gender"],
        genre=campaign["genre"],
        target_cpa=campaign["target_cpa"],
        text_embedding=(noise_text + signal * directions["text"]).tolist(),
        image_embedding=(noise_image + signal * directions["image"]).tolist(),
        daily=daily,
        lifetime_days=lifetime,
        censored=censored,
        total_sales=round(float(conversions.sum() * campaign["sales_value"]), 2),
    )
    trace = OracleTrace(
        creative_id=creative_id,
        discontinuation_day=lifetime,
        mechanism=mechanism,
        cpa_ratio=ratios[:served].tolist(),
    )
    return creative, trace


def _campaign(rng: np.random.Generator, config: GeneratorConfig, index: int) -> dict:
    low, high = config.target_cpa
    return {
        "campaign_id": f"camp{index:05d}",
        "gender": GENDERS[int(rng.integers(len(GENDERS)))],
        "genre": config.genres[int(rng.integers(len(config.genres)))],
        "target_cpa": round(float(rng.uniform(low, high)), 2),
        "cpc": config.cost_per_click_median * float(np.exp(0.2 * rng.standard_normal())),
        "impression_scale": float(np.exp(config.impression_sigma * rng.standard_normal())),
        "sales_value": config.sales_value_median * float(np.exp(config.sales_value_sigma * rng.standard_normal())),
        "size": int(rng.integers(config.creatives_per_campaign[0], config.creatives_per_campaign[1] + 1)),
    }


def generate(config: GeneratorConfig) -> GeneratedDataset:
    """Creatives and oracle traces; bit-identical for the same config

    Each campaign draws from its own generator seeded by (seed, campaign
    index), so campaigns are independent of generation order.
    """
    _check_feasible(config)
    direction_rng = np.random.default_rng([config.seed, 0])
    directions = {
        "text": _unit(direction_rng.standard_normal(config.text_dim)),
        "image": _unit(direction_rng.standard_normal(config.image_dim)),
    }

    creatives, oracle = [], []
    for index in range(config.n_campaigns):
        rng = np.random.default_rng([config.seed, 2, index])
        campaign = _campaign(rng, config, index)
        for k in range(campaign["size"]):
            creative, trace = _creative(rng, config, campaign, f"{campaign['campaign_id']}-{k:03d}", directions)
            creatives.append(creative)
            oracle.append(trace)

    mechanisms = {name: sum(t.mechanism == name for t in oracle) for name in MECHANISMS}
    logger.info(f"Generated {len(creatives)} creatives in {config.n_campaigns} campaigns: {mechanisms}")
    return GeneratedDataset(creatives=creatives, oracle=oracle)
