"""Fitting models from config sections and running them over creatives"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from config.schema import ModelSection, TrainingSection
from engine.checkpoint import load_checkpoint, save_checkpoint
from engine.network import forward_arrays
from engine.spec import ModelSpec, build_model_spec
from engine.state import ModelState
from engine.trainer import TrainConfig, TrainResult, train
from features.assemble import FeatureMask, build_training_set, encode_batch
from features.metadata import DatasetMetadata
from features.records import AdCreative
from survival.grid import LONG_GRID, MERGED_GRID, SHORT_GRID, TimeGrid, interval_indices
from survival.hazard import merge_two_term_matrix
from survival.losses import LossWeighting
from utils.errors import ContractViolation
from utils.logging import get_logger

logger = get_logger(__name__)

GRIDS = {"short": SHORT_GRID, "long": LONG_GRID, "overall": MERGED_GRID}


@dataclass
class ModelBundle:
    """A trained model with everything needed to encode creatives for it"""
    spec: ModelSpec
    state: ModelState
    days_used: int
    vocab: Dict[str, int]
    text_dim: int
    image_dim: int

    @property
    def mask(self) -> FeatureMask:
        return FeatureMask.from_blocks(self.spec.blocks)

    def encode(self, creatives: Sequence[AdCreative], days_used: Optional[int] = None):
        days = self.days_used if days_used is None else days_used
        return encode_batch(creatives, days, self.vocab, self.mask, self.text_dim, self.image_dim)


def model_spec_for(model: ModelSection, metadata: DatasetMetadata) -> ModelSpec:
    mask = FeatureMask.from_names(model.features)
    return build_model_spec(
        task_mode=model.task_mode,
        blocks=mask.block_widths(metadata.text_dim, metadata.image_dim),
        genre_cardinality=metadata.genre_cardinality,
        trunk_layers=tuple(tuple(layer) for layer in model.trunk_layers),
        horizon=model.horizon,
        regression_term=model.regression_term,
    )


def fit_model(
    model: ModelSection,
    training: TrainingSection,
    train_creatives: Sequence[AdCreative],
    validation_creatives: Sequence[AdCreative],
    metadata: DatasetMetadata,
) -> Tuple[ModelBundle, TrainResult]:
    """Train one model; the bundle carries the best-validation parameters"""
    spec = model_spec_for(model, metadata)
    mask = FeatureMask.from_names(model.features)

    def dataset(creatives):
        return build_training_set(
            spec, creatives, model.days_used, metadata.genre_vocabulary, mask,
            metadata.text_dim, metadata.image_dim, training.weighting, metadata.p95_impressions,
        )

    config = TrainConfig(
        batch_size=training.batch_size,
        epochs=training.epochs,
        lr=training.lr,
        seed=training.seed,
        weighting=LossWeighting(mode=training.weighting, lam=training.lam),
    )
    validation = dataset(validation_creatives) if validation_creatives else None
    result = train(spec, dataset(train_creatives), config, validation=validation)
    logger.info(
        f"Fitted {model.task_mode} [{mask.label}] weighting={training.weighting} "
        f"days_used={model.days_used}: best epoch {result.best_epoch}"
    )
    bundle = ModelBundle(
        spec=spec,
        state=result.best_state,
        days_used=model.days_used,
        vocab=dict(metadata.genre_vocabulary),
        text_dim=metadata.text_dim,
        image_dim=metadata.image_dim,
    )
    return bundle, result


def predict_outputs(bundle: ModelBundle, creatives: Sequence[AdCreative], days_used: Optional[int] = None) -> Dict[str, np.ndarray]:
    """Raw head outputs, (n, width) per head"""
    outputs, _ = forward_arrays(bundle.spec, bundle.state, bundle.encode(creatives, days_used))
    return outputs


def grid_hazards(spec: ModelSpec, outputs: Dict[str, np.ndarray]) -> Dict[str, np.ndarray]:
    """Hazard matrices keyed by grid name; multi-task models also give merged overall hazards"""
    if spec.task_mode == "multi-task":
        return {
            "short": outputs["short"],
            "long": outputs["long"],
            "overall": merge_two_term_matrix(outputs["short"], outputs["long"]),
        }
    if spec.task_mode in GRIDS:
        return {spec.task_mode: outputs[spec.task_mode]}
    return {}


def hazards_on(bundle: ModelBundle, creatives: Sequence[AdCreative], grid_name: str, days_used: Optional[int] = None) -> np.ndarray:
    hazards = grid_hazards(bundle.spec, predict_outputs(bundle, creatives, days_used))
    if grid_name not in hazards:
        raise ContractViolation(f"a {bundle.spec.task_mode} model has no {grid_name} hazards")
    return hazards[grid_name]


def snap_to_interval(grid: TimeGrid, days) -> np.ndarray:
    """Interval index holding each predicted day; days at or below t_0 fall in interval 1, 0 past t_L"""
    days = np.maximum(np.asarray(days, dtype=float), np.finfo(float).tiny)
    return interval_indices(grid, days)


def save_bundle(path, bundle: ModelBundle, fingerprint: str = "") -> Path:
    """Checkpoint the model together with the encoding settings it was trained with"""
    extra = {
        "days_used": bundle.days_used,
        "genre_vocabulary": bundle.vocab,
        "text_dim": bundle.text_dim,
        "image_dim": bundle.image_dim,
        "config_fingerprint": fingerprint,
    }
    return save_checkpoint(path, bundle.spec, bundle.state, extra)


def load_bundle(path) -> ModelBundle:
    spec, state, extra = load_checkpoint(path)
    missing = {"days_used", "genre_vocabulary", "text_dim", "image_dim"} - set(extra)
    if missing:
        raise ContractViolation(f"checkpoint {path} lacks encoding settings {sorted(missing)}")
    return ModelBundle(
        spec=spec,
        state=state,
        days_used=int(extra["days_used"]),
        vocab={k: int(v) for k, v in extra["genre_vocabulary"].items()},
        text_dim=int(extra["text_dim"]),
        image_dim=int(extra["image_dim"]),
    )


def check_compatible(bundle: ModelBundle, metadata: DatasetMetadata):
    """The dataset must produce the block widths the model was built for"""
    blocks = bundle.spec.blocks
    expected = {"text": (blocks.text, metadata.text_dim), "image": (blocks.image, metadata.image_dim)}
    for block, (width, available) in expected.items():
        if width and width != available:
            raise ContractViolation(f"feature block '{block}' has width {available} in the dataset, model expects {width}")
    if blocks.genre and metadata.genre_cardinality > bundle.spec.genre_cardinality:
        raise ContractViolation(
            f"feature block 'genre' has {metadata.genre_cardinality} categories in the dataset, "
            f"model expects {bundle.spec.genre_cardinality}"
        )
