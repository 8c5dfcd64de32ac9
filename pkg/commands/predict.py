"""predict: per-creative hazards, risk scores and predicted intervals"""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from commands.layout import RunLayout, load_metadata, load_split
from config.loader import config_fingerprint
from config.schema import ExperimentConfig
from evaluation.modeling import check_compatible, load_bundle
from evaluation.predictions import predict_records, write_predictions
from storage.manifest import record_run
from utils.errors import DomainError
from utils.logging import get_logger

logger = get_logger(__name__)


@dataclass
class PredictOutcome:
    predictions: Path
    n: int
    as_of_day: int


def cmd_predict(
    config: ExperimentConfig,
    checkpoint: Optional[str] = None,
    split: str = "test",
    as_of_day: Optional[int] = None,
    threshold: Optional[float] = None,
    output: Optional[str] = None,
) -> PredictOutcome:
    """Predict a dataset split from a checkpoint

    Features read daily rows up to as_of_day only (default: the days the
    model was trained with).
    """
    layout = RunLayout.from_config(config)
    bundle = load_bundle(checkpoint or layout.checkpoint)
    check_compatible(bundle, load_metadata(layout))
    days = bundle.days_used if as_of_day is None else as_of_day
    if days < 0:
        raise DomainError(f"as-of day must be >= 0, got {days}")
    threshold = config.evaluation.discontinuation_threshold if threshold is None else threshold
    if not 0.0 < threshold < 1.0:
        raise DomainError(f"threshold must lie in (0, 1), got {threshold}")

    creatives = load_split(layout, split)
    records = predict_records(bundle, creatives, days, threshold)
    path = write_predictions(Path(output) if output else layout.predictions, records)

    record_run(str(layout.out_dir), "predict", config_fingerprint(config), config.training.seed, [path])
    logger.info(f"Wrote {len(records)} predictions (as-of day {days}, threshold {threshold}) to {path}")
    return PredictOutcome(predictions=path, n=len(records), as_of_day=days)
