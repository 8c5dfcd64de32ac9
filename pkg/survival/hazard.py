"""Hazard vectors, survival curves and the decisions derived from them"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from config.settings import DISCONTINUATION_THRESHOLD, LONG_BOUNDS, SHORT_BOUNDS
from survival.grid import MERGED_GRID, TimeGrid
from utils.errors import ContractViolation, DomainError

NO_DISCONTINUATION = "none"


def _frozen(values) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class HazardVector:
    grid: TimeGrid
    h: np.ndarray

    def __post_init__(self):
        h = _frozen(self.h).reshape(-1)
        if h.shape[0] != self.grid.L:
            raise ContractViolation(f"hazard length {h.shape[0]} does not match grid L={self.grid.L}")
        if np.any(~np.isfinite(h)) or np.any(h < 0) or np.any(h > 1):
            raise ContractViolation("hazards must be probabilities in [0, 1]")
        object.__setattr__(self, "h", h)

    def __len__(self):
        return self.grid.L


@dataclass(frozen=True, eq=False)
class SurvivalCurve:
    grid: TimeGrid
    s: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "s", _frozen(self.s).reshape(-1))


def survival_curve(h: HazardVector) -> SurvivalCurve:
    """s_l = prod_{k<=l} (1 - h_k)"""
    return SurvivalCurve(h.grid, np.cumprod(1.0 - h.h))


def survival_matrix(hazards: np.ndarray) -> np.ndarray:
    """Row-wise survival curves for a (n, L) hazard matrix"""
    return np.cumprod(1.0 - np.asarray(hazards, dtype=float), axis=1)


def survival_at(h: HazardVector, day: float) -> float:
    """Survival probability at the end of the interval holding `day`"""
    if not day > 0:
        raise DomainError(f"day must be positive, got {day}")
    curve = survival_curve(h).s
    if day <= h.grid.lower:
        return 1.0
    upper = np.asarray(h.grid.bounds[1:])
    position = min(int(np.searchsorted(upper, day, side="left")), h.grid.L - 1)
    return float(curve[position])


def risk_score(h: HazardVector) -> float:
    """Negative expected survival time on the grid, -sum_l s_l * width_l"""
    curve = survival_curve(h).s
    return float(-np.sum(curve * h.grid.widths))


def risk_scores(grid: TimeGrid, hazards: np.ndarray) -> np.ndarray:
    """risk_score over each row of a (n, L) hazard matrix"""
    return -(survival_matrix(hazards) * grid.widths[None, :]).sum(axis=1)


def decide_discontinuation(h: HazardVector, threshold: float = DISCONTINUATION_THRESHOLD) -> Union[int, str]:
    """Smallest 1-based l with h_l > threshold, else NO_DISCONTINUATION"""
    if not 0 < threshold < 1:
        raise DomainError(f"threshold must lie in (0, 1), got {threshold}")
    crossed = np.nonzero(h.h > threshold)[0]
    if crossed.size == 0:
        return NO_DISCONTINUATION
    return int(crossed[0]) + 1


def first_crossings(hazards: np.ndarray, threshold: float = DISCONTINUATION_THRESHOLD) -> np.ndarray:
    """Vectorized decide_discontinuation; 0 marks no crossing"""
    above = np.asarray(hazards) > threshold
    return np.where(above.any(axis=1), above.argmax(axis=1) + 1, 0)


def merge_two_term(h_short: HazardVector, h_long: HazardVector) -> HazardVector:
    """Splice short-grid hazards with long-grid hazards past the short horizon

    The long model's first interval (1,10] is covered by the short grid and
    is dropped; its survival mass is carried by the short-term product.
    """
    if h_short.grid.bounds != SHORT_BOUNDS:
        raise ContractViolation(f"short hazards must live on the short preset grid, got {h_short.grid.bounds}")
    if h_long.grid.bounds != LONG_BOUNDS:
        raise ContractViolation(f"long hazards must live on the long preset grid, got {h_long.grid.bounds}")
    return HazardVector(MERGED_GRID, np.concatenate([h_short.h, h_long.h[1:]]))


def merge_two_term_matrix(short: np.ndarray, long: np.ndarray) -> np.ndarray:
    """Row-wise merge_two_term for (n, 4) and (n, 5) hazard matrices"""
    short, long = np.asarray(short), np.asarray(long)
    if short.shape[1] != len(SHORT_BOUNDS) - 1 or long.shape[1] != len(LONG_BOUNDS) - 1:
        raise ContractViolation("hazard matrices do not match the short/long presets")
    return np.concatenate([short, long[:, 1:]], axis=1)

