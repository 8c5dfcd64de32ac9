"""Classification and regression baseline losses"""

import math

from config.settings import PROB_EPSILON
from survival.losses import weighted_loss
from utils.errors import DomainError


def binary_cross_entropy(p: float, y: int, eps: float = PROB_EPSILON) -> float:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability must lie in [0, 1], got {p}")
    if y not in (0, 1):
        raise DomainError(f"binary label must be 0 or 1, got {y}")
    p = min(max(p, eps), 1.0 - eps)
    return -(y * math.log(p) + (1 - y) * math.log(1.0 - p))


def squared_error(predicted: float, actual: float) -> float:
    return (predicted - actual) ** 2


def baseline_loss(kind: str, prediction: float, label: float, ratio: float = 0.0, mode: str = "none") -> float:
    """BCE ("classification") or MSE ("regression"), with the (r + 1) weighting factor"""
    if kind == "classification":
        base = binary_cross_entropy(prediction, int(label))
    elif kind == "regression":
        base = squared_error(prediction, label)
    else:
        raise DomainError(f"unknown baseline kind '{kind}'")
    return weighted_loss(base, ratio, mode)
