"""Adam optimizer"""

from typing import Dict

import numpy as np

from config.settings import ADAM_BETA1, ADAM_BETA2, ADAM_EPSILON, LEARNING_RATE
from engine.state import ModelState
from utils.errors import DomainError, TrainingError


def adam_step(
    state: ModelState,
    gradients: Dict[str, np.ndarray],
    lr: float = LEARNING_RATE,
    beta1: float = ADAM_BETA1,
    beta2: float = ADAM_BETA2,
    eps: float = ADAM_EPSILON,
) -> ModelState:
    """Bias-corrected Adam update; returns a new state and leaves the input untouched"""
    if not lr > 0:
        raise DomainError(f"learning rate must be positive, got {lr}")
    for name, grad in gradients.items():
        if not np.all(np.isfinite(grad)):
            raise TrainingError(f"non-finite gradient for parameter '{name}'")

    step = state.step_count + 1
    params, m, v = {}, {}, {}
    for name, value in state.params.items():
        grad = gradients.get(name)
        if grad is None:
            grad = np.zeros_like(value)
        m[name] = beta1 * state.m[name] + (1.0 - beta1) * grad
        v[name] = beta2 * state.v[name] + (1.0 - beta2) * grad * grad
        m_hat = m[name] / (1.0 - beta1 ** step)
        v_hat = v[name] / (1.0 - beta2 ** step)
        params[name] = value - lr * m_hat / (np.sqrt(v_hat) + eps)
    return ModelState(params=params, m=m, v=v, step_count=step)
