"""Hazard likelihood and the loss functions built on it

Scalar functions take one HazardVector and its EventLabels; the `*_terms`
variants work on (n, L) matrices and are what the training engine uses.
"""

from dataclasses import dataclass

import numpy as np

from config.settings import MTL_LAMBDA, PROB_EPSILON, WEIGHTING_MODES
from survival.hazard import HazardVector
from survival.labels import EventLabels
from utils.errors import ContractViolation, DomainError


@dataclass(frozen=True)
class LossWeighting:
    mode: str = "none"
    lam: float = MTL_LAMBDA

    def __post_init__(self):
        if self.mode not in WEIGHTING_MODES:
            raise DomainError(f"weighting mode must be one of {WEIGHTING_MODES}, got '{self.mode}'")
        if not 0.0 <= self.lam <= 1.0:
            raise DomainError(f"lambda must lie in [0, 1], got {self.lam}")


def _check_pair(h: HazardVector, y: EventLabels):
    if not h.grid.same_as(y.grid):
        raise ContractViolation("hazards and labels live on different grids")


def likelihood(h: HazardVector, y: EventLabels) -> float:
    """prod_{l<=l'} h_l^delta_l (1 - h_l)^(1 - delta_l)"""
    _check_pair(h, y)
    hazards = h.h[: y.observed_count]
    delta = np.asarray(y.delta, dtype=float)
    return float(np.prod(np.where(delta == 1, hazards, 1.0 - hazards)))


def negative_log_likelihood(h: HazardVector, y: EventLabels, eps: float = PROB_EPSILON) -> float:
    """-sum_{l<=l'} [delta_l log h_l + (1 - delta_l) log(1 - h_l)], probabilities clamped to [eps, 1-eps]"""
    _check_pair(h, y)
    hazards = np.clip(h.h[: y.observed_count], eps, 1.0 - eps)
    delta = np.asarray(y.delta, dtype=float)
    return float(-np.sum(delta * np.log(hazards) + (1.0 - delta) * np.log(1.0 - hazards)))


def nll_terms(hazards: np.ndarray, delta: np.ndarray, observed: np.ndarray, eps: float = PROB_EPSILON) -> np.ndarray:
    """Per-interval Bernoulli NLL terms, zero outside the observed intervals"""
    p = np.clip(hazards, eps, 1.0 - eps)
    return -observed * (delta * np.log(p) + (1.0 - delta) * np.log(1.0 - p))


def nll_rows(hazards: np.ndarray, delta: np.ndarray, observed: np.ndarray, eps: float = PROB_EPSILON) -> np.ndarray:
    return nll_terms(hazards, delta, observed, eps).sum(axis=1)


def weighted_loss(base_loss: float, ctr: float, mode: str) -> float:
    """(r + 1) * loss; r is the CTR, or the normalized impression ratio in impression mode"""
    if mode not in WEIGHTING_MODES:
        raise DomainError(f"weighting mode must be one of {WEIGHTING_MODES}, got '{mode}'")
    if mode == "none":
        return base_loss
    if not 0.0 <= ctr <= 1.0:
        raise DomainError(f"weighting ratio must lie in [0, 1], got {ctr}")
    return (ctr + 1.0) * base_loss


def loss_weights(ratios: np.ndarray, mode: str) -> np.ndarray:
    """Vectorized weight factor of weighted_loss"""
    ratios = np.asarray(ratios, dtype=float)
    if mode == "none":
        return np.ones_like(ratios)
    if np.any(ratios < 0) or np.any(ratios > 1):
        raise DomainError("weighting ratios must lie in [0, 1]")
    return ratios + 1.0


def mtl_loss(loss_short: float, loss_long: float, lam: float = MTL_LAMBDA) -> float:
    """lambda * short + (1 - lambda) * long"""
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    return lam * loss_short + (1.0 - lam) * loss_long
