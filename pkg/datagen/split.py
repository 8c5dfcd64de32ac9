"""Campaign-stratified train/validation/test assignment"""

from collections import defaultdict
from typing import Dict, List, Sequence, Tuple

import numpy as np

from config.settings import SPLIT_FRACTIONS, SPLIT_NAMES
from features.records import AdCreative
from utils.errors import DomainError
from utils.logging import get_logger

logger = get_logger(__name__)

STRATA = 10


def _allocate(count: int, fractions: Sequence[float], rng) -> List[int]:
    """Whole-campaign counts per split summing to count (largest remainder, random ties)"""
    raw = np.asarray(fractions, dtype=float) * count
    sizes = np.floor(raw).astype(int)
    order = np.lexsort((rng.random(len(raw)), -(raw - sizes)))
    for i in order[: count - sizes.sum()]:
        sizes[i] += 1
    return sizes.tolist()


def _assign(campaigns: List[str], fractions, rng) -> Dict[str, str]:
    shuffled = [campaigns[i] for i in rng.permutation(len(campaigns))]
    assignment, start = {}, 0
    for name, size in zip(SPLIT_NAMES, _allocate(len(shuffled), fractions, rng)):
        for campaign_id in shuffled[start: start + size]:
            assignment[campaign_id] = name
        start += size
    return assignment


def split(
    creatives: Sequence[AdCreative],
    fractions: Tuple[float, float, float] = SPLIT_FRACTIONS,
    seed: int = 42,
) -> Dict[str, str]:
    """Campaign id -> split name; whole campaigns stay together

    Campaigns are sorted by mean lifetime, cut into deciles and allocated
    60/20/20 inside each decile. Fewer than 3 campaigns fall back to a
    plain random campaign assignment.
    """
    if len(fractions) != 3 or any(f < 0 for f in fractions) or not np.isclose(sum(fractions), 1.0):
        raise DomainError(f"split fractions must be three non-negative numbers summing to 1, got {fractions}")
    lifetimes = defaultdict(list)
    for creative in creatives:
        lifetimes[creative.campaign_id].append(creative.lifetime_days)
    campaigns = sorted(lifetimes)
    rng = np.random.default_rng([seed, 3])

    if len(campaigns) < 3:
        logger.warning(f"Only {len(campaigns)} campaign(s); falling back to unstratified campaign split")
        return _assign(campaigns, fractions, rng)

    ranked = sorted(campaigns, key=lambda c: (float(np.mean(lifetimes[c])), c))
    assignment = {}
    for stratum in np.array_split(np.arange(len(ranked)), min(STRATA, len(ranked))):
        assignment.update(_assign([ranked[i] for i in stratum], fractions, rng))
    return assignment


def split_creatives(creatives: Sequence[AdCreative], assignment: Dict[str, str]) -> Dict[str, List[AdCreative]]:
    parts = {name: [] for name in SPLIT_NAMES}
    for creative in creatives:
        parts[assignment[creative.campaign_id]].append(creative)
    return parts
