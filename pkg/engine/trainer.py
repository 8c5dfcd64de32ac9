"""Mini-batch training loop"""

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from config.settings import ADAM_BETA1, ADAM_BETA2, ADAM_EPSILON, BATCH_SIZE, EPOCHS, LEARNING_RATE
from engine.batch import TrainingSet
from engine.network import backward, batch_loss
from engine.optim import adam_step
from engine.spec import ModelSpec
from engine.state import ModelState, init_state
from survival.losses import LossWeighting
from utils.errors import DomainError, TrainingError
from utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = BATCH_SIZE
    epochs: int = EPOCHS
    lr: float = LEARNING_RATE
    seed: int = 42
    weighting: LossWeighting = field(default_factory=LossWeighting)
    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    adam_eps: float = ADAM_EPSILON


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float
    val_loss: Optional[float] = None


@dataclass
class TrainResult:
    state: ModelState
    best_state: ModelState
    best_epoch: int
    initial_loss: float
    trace: List[EpochRecord] = field(default_factory=list)


def _check_finite(value: float, what: str, last_finite_epoch: int):
    if not math.isfinite(value):
        raise TrainingError(f"{what} diverged (non-finite loss)", last_finite_epoch=last_finite_epoch)


def train(
    spec: ModelSpec,
    dataset: TrainingSet,
    config: TrainConfig,
    validation: Optional[TrainingSet] = None,
    initial_state: Optional[ModelState] = None,
) -> TrainResult:
    """Train with Adam over shuffled mini-batches; deterministic given the seed

    Epoch order is drawn from a generator seeded by (seed, epoch). The last
    mini-batch of an epoch may be smaller than batch_size.
    """
    if len(dataset) == 0:
        raise DomainError("cannot train on an empty dataset")
    if config.batch_size < 1 or config.epochs < 0:
        raise DomainError("batch size must be >= 1 and epochs >= 0")

    state = initial_state.copy() if initial_state is not None else init_state(spec, config.seed)
    initial_loss = batch_loss(spec, state, dataset, config.weighting)
    _check_finite(initial_loss, "initial training loss", 0)
    logger.info(
        f"Training {spec.task_mode} model: n={len(dataset)}, epochs={config.epochs}, "
        f"batch={config.batch_size}, weighting={config.weighting.mode}, initial loss={initial_loss:.6f}"
    )

    best_state, best_epoch, best_score = state.copy(), 0, math.inf
    if validation is not None and len(validation):
        best_score = batch_loss(spec, state, validation, config.weighting)
    trace: List[EpochRecord] = []
    n = len(dataset)

    for epoch in range(1, config.epochs + 1):
        order = np.random.default_rng([config.seed, 1, epoch]).permutation(n)
        running, seen = 0.0, 0
        for start in range(0, n, config.batch_size):
            index = order[start: start + config.batch_size]
            batch = dataset.take(index)
            loss, grads = backward(spec, state, batch.features, batch.targets, config.weighting, batch.ratios)
            _check_finite(loss, f"epoch {epoch}", epoch - 1)
            state = adam_step(state, grads, config.lr, config.beta1, config.beta2, config.adam_eps)
            running += loss * len(index)
            seen += len(index)

        record = EpochRecord(epoch=epoch, train_loss=running / seen)
        if validation is not None and len(validation):
            record.val_loss = batch_loss(spec, state, validation, config.weighting)
            _check_finite(record.val_loss, f"epoch {epoch} validation", epoch - 1)
        trace.append(record)

        score = record.val_loss if record.val_loss is not None else record.train_loss
        if score < best_score:
            best_state, best_epoch, best_score = state.copy(), epoch, score
        logger.info(f"epoch {epoch}: train_loss={record.train_loss:.6f} val_loss={record.val_loss}")

    if validation is None or not len(validation):
        best_state, best_epoch = state.copy(), config.epochs
    return TrainResult(state=state, best_state=best_state, best_epoch=best_epoch, initial_loss=initial_loss, trace=trace)
