"""Model architecture description"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from config.settings import (
    GENRE_EMBEDDING_DIM,
    IMAGE_EMBEDDING_DIM,
    LONG_BOUNDS,
    MERGED_BOUNDS,
    SERIES_HIDDEN_WIDTH,
    SERIES_INPUT_WIDTH,
    SHORT_BOUNDS,
    STAT_FEATURE_COUNT,
    TEXT_EMBEDDING_DIM,
    TRUNK_LAYERS,
    GENDERS,
)
from survival.grid import TimeGrid
from utils.errors import ContractViolation

ACTIVATIONS = ("relu", "tanh", "linear", "sigmoid")
HEAD_ACTIVATIONS = ("sigmoid", "linear")

# Which head(s) each task mode trains
HAZARD_HEAD_BOUNDS = {
    "short": SHORT_BOUNDS,
    "long": LONG_BOUNDS,
    "overall": MERGED_BOUNDS,
}


@dataclass(frozen=True)
class HeadSpec:
    """One output head; hazard heads carry the bounds of their grid"""
    name: str
    width: int
    activation: str = "sigmoid"
    bounds: Optional[Tuple[float, ...]] = None
    horizon: Optional[float] = None

    @property
    def grid(self) -> Optional[TimeGrid]:
        return TimeGrid(self.bounds, name=self.name) if self.bounds is not None else None

    @property
    def is_hazard(self) -> bool:
        return self.bounds is not None and self.activation == "sigmoid" and self.horizon is None


@dataclass(frozen=True)
class BlockWidths:
    """Widths of the feature blocks; 0 switches a block off"""
    text: int = TEXT_EMBEDDING_DIM
    gender: int = len(GENDERS)
    genre: int = GENRE_EMBEDDING_DIM
    image: int = IMAGE_EMBEDDING_DIM
    stats: int = STAT_FEATURE_COUNT
    series: int = SERIES_HIDDEN_WIDTH

    def as_dict(self) -> Dict[str, int]:
        return {
            "text": self.text,
            "gender": self.gender,
            "genre": self.genre,
            "image": self.image,
            "stats": self.stats,
            "series": self.series,
        }

    @property
    def total(self) -> int:
        return sum(self.as_dict().values())


@dataclass(frozen=True)
class ModelSpec:
    """Trunk MLP over e1 || e2 || e3 || e4, with one or two output heads"""
    task_mode: str
    blocks: BlockWidths
    genre_cardinality: int
    heads: Tuple[HeadSpec, ...]
    trunk_layers: Tuple[Tuple[int, str], ...] = TRUNK_LAYERS
    series_input_width: int = SERIES_INPUT_WIDTH
    cell: str = "elman"

    def __post_init__(self):
        if not self.heads:
            raise ContractViolation("a model needs at least one head")
        if self.task_mode == "multi-task":
            names = tuple(head.name for head in self.heads)
            if names != ("short", "long"):
                raise ContractViolation(f"multi-task models have exactly a short and a long head, got {names}")
        elif len(self.heads) != 1:
            raise ContractViolation("single-task models have exactly one head")
        for head in self.heads:
            if head.activation not in HEAD_ACTIVATIONS:
                raise ContractViolation(f"unknown head activation '{head.activation}'")
            if head.is_hazard and head.width != len(head.bounds) - 1:
                raise ContractViolation(f"head '{head.name}' width {head.width} does not match its grid")
        for width, activation in self.trunk_layers:
            if width < 1 or activation not in ACTIVATIONS:
                raise ContractViolation(f"invalid trunk layer ({width}, {activation})")
        if self.cell != "elman":
            raise ContractViolation(f"unsupported recurrent cell '{self.cell}'")
        if self.genre_cardinality < 1:
            raise ContractViolation("genre table needs at least the unknown bucket")

    @property
    def input_width(self) -> int:
        return self.blocks.total

    @property
    def has_series(self) -> bool:
        return self.blocks.series > 0

    @property
    def recurrent(self) -> Optional[Tuple[int, int]]:
        return (self.series_input_width, self.blocks.series) if self.has_series else None

    def head(self, name: str) -> HeadSpec:
        for head in self.heads:
            if head.name == name:
                return head
        raise ContractViolation(f"model has no head '{name}'")

    def head_coefficients(self, lam: float) -> Dict[str, float]:
        if self.task_mode == "multi-task":
            return {"short": lam, "long": 1.0 - lam}
        return {self.heads[0].name: 1.0}


def hazard_head(name: str) -> HeadSpec:
    bounds = HAZARD_HEAD_BOUNDS[name]
    return HeadSpec(name=name, width=len(bounds) - 1, bounds=bounds)


def build_model_spec(
    task_mode: str,
    blocks: BlockWidths,
    genre_cardinality: int,
    trunk_layers: Tuple[Tuple[int, str], ...] = TRUNK_LAYERS,
    horizon: Optional[float] = None,
    regression_term: str = "short",
) -> ModelSpec:
    """Heads follow the task mode: short/long/overall hazards, both for multi-task,
    a single probability for a classification horizon, a single day value for regression"""
    if task_mode in HAZARD_HEAD_BOUNDS:
        heads = (hazard_head(task_mode),)
    elif task_mode == "multi-task":
        heads = (hazard_head("short"), hazard_head("long"))
    elif task_mode == "classification":
        if horizon is None:
            raise ContractViolation("classification models need a horizon")
        bounds = SHORT_BOUNDS if horizon <= SHORT_BOUNDS[-1] else LONG_BOUNDS
        heads = (HeadSpec(name=f"horizon_{int(horizon)}", width=1, bounds=bounds, horizon=float(horizon)),)
    elif task_mode == "regression":
        bounds = HAZARD_HEAD_BOUNDS[regression_term]
        heads = (HeadSpec(name=f"days_{regression_term}", width=1, activation="linear", bounds=bounds),)
    else:
        raise ContractViolation(f"unknown task mode '{task_mode}'")
    return ModelSpec(
        task_mode=task_mode,
        blocks=blocks,
        genre_cardinality=genre_cardinality,
        heads=heads,
        trunk_layers=tuple(tuple(layer) for layer in trunk_layers),
    )
