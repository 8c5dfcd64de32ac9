"""Learnable parameters, Adam moments and initialization"""

from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from engine.spec import ModelSpec


@dataclass
class ModelState:
    params: Dict[str, np.ndarray]
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)
    step_count: int = 0

    def __post_init__(self):
        for name, value in self.params.items():
            self.m.setdefault(name, np.zeros_like(value))
            self.v.setdefault(name, np.zeros_like(value))

    def copy(self) -> "ModelState":
        return ModelState(
            params={k: v.copy() for k, v in self.params.items()},
            m={k: v.copy() for k, v in self.m.items()},
            v={k: v.copy() for k, v in self.v.items()},
            step_count=self.step_count,
        )

    def equals(self, other: "ModelState") -> bool:
        """Bit-identical parameters, moments and step count"""
        if self.step_count != other.step_count or self.params.keys() != other.params.keys():
            return False
        return all(
            np.array_equal(mine[k], theirs[k])
            for mine, theirs in ((self.params, other.params), (self.m, other.m), (self.v, other.v))
            for k in self.params
        )


def glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def init_state(spec: ModelSpec, seed: int) -> ModelState:
    """Glorot-uniform weights from a seeded generator, zero biases"""
    rng = np.random.default_rng([seed, 0])
    params: Dict[str, np.ndarray] = {}

    if spec.blocks.genre:
        params["genre_embedding"] = glorot_uniform(rng, spec.genre_cardinality, spec.blocks.genre)
    if spec.has_series:
        inputs, hidden = spec.recurrent
        params["rnn_wx"] = glorot_uniform(rng, inputs, hidden)
        params["rnn_wh"] = glorot_uniform(rng, hidden, hidden)
        params["rnn_b"] = np.zeros(hidden)

    width = spec.input_width
    for i, (units, _) in enumerate(spec.trunk_layers):
        params[f"trunk_{i}_w"] = glorot_uniform(rng, width, units)
        params[f"trunk_{i}_b"] = np.zeros(units)
        width = units
    for head in spec.heads:
        params[f"head_{head.name}_w"] = glorot_uniform(rng, width, head.width)
        params[f"head_{head.name}_b"] = np.zeros(head.width)
    return ModelState(params=params)
