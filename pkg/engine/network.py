"""Forward pass and exact reverse-mode gradients of the hazard network

Layout of the trunk input, per creative:
    text || gender one-hot || genre embedding || image || stats || series hidden
"""

from typing import Dict, Tuple

import numpy as np
from scipy.special import expit

from config.settings import PROB_EPSILON
from engine.batch import FeatureBatch, HeadTargets
from engine.spec import ModelSpec
from engine.state import ModelState
from survival.hazard import HazardVector
from survival.losses import LossWeighting, loss_weights
from utils.errors import ContractViolation, DomainError


def _activate(z: np.ndarray, activation: str) -> np.ndarray:
    if activation == "relu":
        return np.maximum(z, 0.0)
    if activation == "tanh":
        return np.tanh(z)
    if activation == "sigmoid":
        return expit(z)
    return z


def _activation_grad(z: np.ndarray, a: np.ndarray, activation: str) -> np.ndarray:
    if activation == "relu":
        return (z > 0).astype(z.dtype)
    if activation == "tanh":
        return 1.0 - a * a
    if activation == "sigmoid":
        return a * (1.0 - a)
    return np.ones_like(z)


def _run_recurrent(state: ModelState, series: np.ndarray, lengths: np.ndarray):
    """Masked Elman recurrence; steps past a creative's length keep its state"""
    wx, wh, b = state.params["rnn_wx"], state.params["rnn_wh"], state.params["rnn_b"]
    n, steps = series.shape[0], series.shape[1]
    h = np.zeros((n, wh.shape[0]))
    trace = []
    for t in range(steps):
        mask = (t < lengths).astype(float)[:, None]
        c = np.tanh(series[:, t] @ wx + h @ wh + b)
        trace.append((h, c, mask))
        h = mask * c + (1.0 - mask) * h
    return h, trace


def recurrent_encode(state: ModelState, series) -> np.ndarray:
    """Final hidden state of the Elman cell run left to right over one series"""
    series = np.asarray(series, dtype=float)
    if series.ndim != 2 or series.shape[0] == 0:
        raise DomainError("recurrent_encode needs a non-empty (T, width) series")
    expected = state.params["rnn_wx"].shape[0]
    if series.shape[1] != expected:
        raise ContractViolation(f"series width {series.shape[1]} does not match recurrent input width {expected}")
    hidden, _ = _run_recurrent(state, series[None], np.array([series.shape[0]]))
    return hidden[0]


def _check_widths(spec: ModelSpec, features: FeatureBatch):
    widths = features.block_widths()
    expected = {
        "text": spec.blocks.text,
        "gender": spec.blocks.gender,
        "image": spec.blocks.image,
        "stats": spec.blocks.stats,
    }
    for block, width in expected.items():
        if widths[block] != width:
            raise ContractViolation(f"feature block '{block}' has width {widths[block]}, model expects {width}")
    if spec.has_series and features.series.shape[1] and widths["series_input"] != spec.series_input_width:
        raise ContractViolation(
            f"feature block 'series' has width {widths['series_input']}, model expects {spec.series_input_width}"
        )


def _embed(spec: ModelSpec, state: ModelState, features: FeatureBatch):
    n = len(features)
    if spec.blocks.genre:
        table = state.params["genre_embedding"]
        genre = np.clip(features.genre.astype(int), 0, table.shape[0] - 1)
        genre_block = table[genre]
    else:
        genre = None
        genre_block = np.zeros((n, 0))
    if spec.has_series:
        hidden, trace = _run_recurrent(state, features.series, features.lengths)
    else:
        hidden, trace = np.zeros((n, 0)), []
    x = np.concatenate(
        [features.text, features.gender, genre_block, features.image, features.stats, hidden], axis=1
    )
    return x, genre, trace


def forward_arrays(spec: ModelSpec, state: ModelState, features: FeatureBatch, keep_cache: bool = False):
    """Head outputs as (n, width) arrays, plus the activation cache when asked"""
    _check_widths(spec, features)
    x, genre, trace = _embed(spec, state, features)
    if x.shape[1] != spec.input_width:
        raise ContractViolation(f"assembled width {x.shape[1]} does not match trunk input width {spec.input_width}")

    layers = []
    a = x
    for i, (_, activation) in enumerate(spec.trunk_layers):
        z = a @ state.params[f"trunk_{i}_w"] + state.params[f"trunk_{i}_b"]
        out = _activate(z, activation)
        layers.append((a, z, out, activation))
        a = out

    outputs = {}
    for head in spec.heads:
        z = a @ state.params[f"head_{head.name}_w"] + state.params[f"head_{head.name}_b"]
        outputs[head.name] = _activate(z, head.activation)

    if not keep_cache:
        return outputs, None
    cache = {"x": x, "genre": genre, "trace": trace, "layers": layers, "top": a}
    return outputs, cache


def forward(spec: ModelSpec, state: ModelState, features: FeatureBatch) -> Dict[str, list]:
    """One HazardVector per hazard head and creative"""
    outputs, _ = forward_arrays(spec, state, features)
    result = {}
    for head in spec.heads:
        if not head.is_hazard:
            continue
        grid = head.grid
        result[head.name] = [HazardVector(grid, row) for row in outputs[head.name]]
    return result


def _head_loss_and_grad(head, output, target: HeadTargets, weights, coefficient, n, eps):
    """Per-head weighted mean loss and its gradient w.r.t. the head's pre-activation"""
    if head.activation == "sigmoid":
        if target.delta is None or target.observed is None:
            raise ContractViolation(f"head '{head.name}' needs event targets")
        if target.delta.shape != output.shape:
            raise ContractViolation(f"targets for head '{head.name}' have shape {target.delta.shape}, expected {output.shape}")
        p = np.clip(output, eps, 1.0 - eps)
        terms = -target.observed * (target.delta * np.log(p) + (1.0 - target.delta) * np.log(1.0 - p))
        rows = terms.sum(axis=1)
        inside = ((output > eps) & (output < 1.0 - eps)).astype(float)
        grad = target.observed * (output - target.delta) * inside
    else:
        if target.value is None:
            raise ContractViolation(f"head '{head.name}' needs value targets")
        diff = output - target.value.reshape(output.shape)
        rows = (diff * diff).sum(axis=1)
        grad = 2.0 * diff
    scale = coefficient * weights / n
    loss = float(np.sum(scale * rows))
    return loss, grad * scale[:, None]


def backward(
    spec: ModelSpec,
    state: ModelState,
    features: FeatureBatch,
    targets: Dict[str, HeadTargets],
    weighting: LossWeighting,
    ratios: np.ndarray = None,
    eps: float = PROB_EPSILON,
) -> Tuple[float, Dict[str, np.ndarray]]:
    """Batch-mean (weighted, MTL-combined) loss and exact gradients for every parameter"""
    n = len(features)
    if n == 0:
        raise DomainError("cannot differentiate an empty batch")
    outputs, cache = forward_arrays(spec, state, features, keep_cache=True)
    if ratios is None:
        ratios = np.zeros(n)
    weights = loss_weights(ratios, weighting.mode)
    coefficients = spec.head_coefficients(weighting.lam)

    grads = {name: np.zeros_like(value) for name, value in state.params.items()}
    top = cache["top"]
    d_top = np.zeros_like(top)
    total = 0.0
    for head in spec.heads:
        if head.name not in targets:
            raise ContractViolation(f"no targets supplied for head '{head.name}'")
        loss, d_out = _head_loss_and_grad(
            head, outputs[head.name], targets[head.name], weights, coefficients[head.name], n, eps
        )
        total += loss
        # sigmoid heads already give d/dz; linear heads have unit derivative
        grads[f"head_{head.name}_w"] = top.T @ d_out
        grads[f"head_{head.name}_b"] = d_out.sum(axis=0)
        d_top += d_out @ state.params[f"head_{head.name}_w"].T

    d_a = d_top
    for i in reversed(range(len(spec.trunk_layers))):
        a_in, z, out, activation = cache["layers"][i]
        d_z = d_a * _activation_grad(z, out, activation)
        grads[f"trunk_{i}_w"] = a_in.T @ d_z
        grads[f"trunk_{i}_b"] = d_z.sum(axis=0)
        d_a = d_z @ state.params[f"trunk_{i}_w"].T

    # split d_x back into its blocks
    widths = spec.blocks
    offset = widths.text + widths.gender
    if widths.genre:
        d_genre = d_a[:, offset: offset + widths.genre]
        np.add.at(grads["genre_embedding"], cache["genre"], d_genre)
    if spec.has_series:
        start = widths.total - widths.series
        _recurrent_backward(state, features, cache["trace"], d_a[:, start:], grads)
    return total, grads


def _recurrent_backward(state, features, trace, d_hidden, grads):
    wh = state.params["rnn_wh"]
    d_h = d_hidden
    for t in reversed(range(len(trace))):
        h_prev, c, mask = trace[t]
        d_a = d_h * mask * (1.0 - c * c)
        grads["rnn_wx"] += features.series[:, t].T @ d_a
        grads["rnn_wh"] += h_prev.T @ d_a
        grads["rnn_b"] += d_a.sum(axis=0)
        d_h = d_a @ wh.T + d_h * (1.0 - mask)


def batch_loss(spec, state, training_set, weighting: LossWeighting, eps: float = PROB_EPSILON) -> float:
    """Mean loss over a whole TrainingSet without gradients"""
    features = training_set.features
    n = len(features)
    outputs, _ = forward_arrays(spec, state, features)
    weights = loss_weights(training_set.ratios, weighting.mode)
    coefficients = spec.head_coefficients(weighting.lam)
    total = 0.0
    for head in spec.heads:
        loss, _ = _head_loss_and_grad(
            head, outputs[head.name], training_set.targets[head.name], weights, coefficients[head.name], n, eps
        )
        total += loss
    return total
