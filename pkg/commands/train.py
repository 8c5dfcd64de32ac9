"""train: fit the configured model and keep the best-validation checkpoint"""

from dataclasses import dataclass
from pathlib import Path
from typing import List

import pandas as pd

from commands.layout import RunLayout, load_metadata, load_split
from config.loader import config_fingerprint
from config.schema import ExperimentConfig
from engine.trainer import EpochRecord
from evaluation.modeling import fit_model, save_bundle
from evaluation.report import write_frame
from storage.manifest import record_run
from utils.logging import get_logger

logger = get_logger(__name__)

TRACE_COLUMNS = ("epoch", "train_loss", "val_loss")


@dataclass
class TrainOutcome:
    checkpoint: Path
    trace_file: Path
    best_epoch: int
    heads: List[str]


def trace_frame(trace: List[EpochRecord]) -> pd.DataFrame:
    return pd.DataFrame(
        [{"epoch": r.epoch, "train_loss": r.train_loss, "val_loss": r.val_loss} for r in trace],
        columns=list(TRACE_COLUMNS),
    )


def cmd_train(config: ExperimentConfig) -> TrainOutcome:
    """Train config.model on the train split, selecting epochs on the validation split"""
    layout = RunLayout.from_config(config)
    fingerprint = config_fingerprint(config)
    metadata = load_metadata(layout)
    train_creatives = load_split(layout, "train")
    validation_creatives = load_split(layout, "validation")

    bundle, result = fit_model(config.model, config.training, train_creatives, validation_creatives, metadata)
    checkpoint = save_bundle(layout.checkpoint, bundle, fingerprint)
    trace_file = write_frame(layout.trace_file, trace_frame(result.trace))

    record_run(str(layout.out_dir), "train", fingerprint, config.training.seed, [checkpoint, trace_file])
    logger.info(f"Checkpoint {checkpoint} holds epoch {result.best_epoch}")
    return TrainOutcome(
        checkpoint=checkpoint,
        trace_file=trace_file,
        best_epoch=result.best_epoch,
        heads=[f"{head.name}({head.width})" for head in bundle.spec.heads],
    )
