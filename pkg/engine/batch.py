"""Model inputs and training targets in array form"""

from dataclasses import dataclass, fields
from typing import Dict, Optional

import numpy as np

from utils.errors import ContractViolation


@dataclass
class FeatureBatch:
    """Raw feature blocks for n creatives

    Disabled blocks have zero columns. `series` is padded to the longest
    series in the batch; `lengths` holds each creative's real length.
    """
    text: np.ndarray      # (n, d_text)
    gender: np.ndarray    # (n, 3)
    genre: np.ndarray     # (n,) int indices
    image: np.ndarray     # (n, d_image)
    stats: np.ndarray     # (n, 6)
    series: np.ndarray    # (n, T, 2)
    lengths: np.ndarray   # (n,) int

    def __post_init__(self):
        n = self.genre.shape[0]
        for item in fields(self):
            value = getattr(self, item.name)
            if value.shape[0] != n:
                raise ContractViolation(f"feature block '{item.name}' has {value.shape[0]} rows, expected {n}")
        if self.series.ndim != 3:
            raise ContractViolation("series block must be (n, T, width)")

    def __len__(self):
        return int(self.genre.shape[0])

    def take(self, index: np.ndarray) -> "FeatureBatch":
        index = np.asarray(index)
        series = self.series[index]
        lengths = self.lengths[index]
        longest = int(lengths.max()) if lengths.size else 0
        return FeatureBatch(
            text=self.text[index],
            gender=self.gender[index],
            genre=self.genre[index],
            image=self.image[index],
            stats=self.stats[index],
            series=series[:, :longest],
            lengths=lengths,
        )

    def block_widths(self) -> Dict[str, int]:
        return {
            "text": self.text.shape[1],
            "gender": self.gender.shape[1],
            "image": self.image.shape[1],
            "stats": self.stats.shape[1],
            "series_input": self.series.shape[2],
        }


@dataclass
class HeadTargets:
    """Targets for one head: Bernoulli (delta, observed) or a real value"""
    delta: Optional[np.ndarray] = None      # (n, width)
    observed: Optional[np.ndarray] = None   # (n, width)
    value: Optional[np.ndarray] = None      # (n, 1)

    def take(self, index: np.ndarray) -> "HeadTargets":
        return HeadTargets(
            delta=None if self.delta is None else self.delta[index],
            observed=None if self.observed is None else self.observed[index],
            value=None if self.value is None else self.value[index],
        )


@dataclass
class TrainingSet:
    """Features, per-head targets and per-record weighting ratios"""
    features: FeatureBatch
    targets: Dict[str, HeadTargets]
    ratios: np.ndarray  # (n,) CTR or impression ratio in [0, 1]

    def __len__(self):
        return len(self.features)

    def take(self, index: np.ndarray) -> "TrainingSet":
        return TrainingSet(
            features=self.features.take(index),
            targets={name: target.take(index) for name, target in self.targets.items()},
            ratios=self.ratios[index],
        )
