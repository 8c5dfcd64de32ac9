"""Per-creative prediction records"""

from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from config.settings import DISCONTINUATION_THRESHOLD
from evaluation.modeling import GRIDS, ModelBundle, grid_hazards, predict_outputs, snap_to_interval
from features.assemble import as_of_day
from features.records import AdCreative
from storage.files import atomic_write_text
from survival.hazard import first_crossings, risk_scores


class PredictionRecord(BaseModel):
    """Model output for one creative; interval 0 means no threshold crossing"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    creative_id: str
    as_of_day: int
    task_mode: str
    threshold: float
    hazards: Dict[str, List[float]] = {}
    risk_scores: Dict[str, float] = {}
    predicted_interval: Dict[str, int] = {}
    probability: Optional[float] = None
    horizon: Optional[float] = None
    predicted_day: Optional[float] = None


def predict_records(
    bundle: ModelBundle,
    creatives: Sequence[AdCreative],
    days_used: Optional[int] = None,
    threshold: float = DISCONTINUATION_THRESHOLD,
) -> List[PredictionRecord]:
    days = bundle.days_used if days_used is None else days_used
    outputs = predict_outputs(bundle, creatives, days)
    hazards = grid_hazards(bundle.spec, outputs)
    risks = {name: risk_scores(GRIDS[name], matrix) for name, matrix in hazards.items()}
    intervals = {name: first_crossings(matrix, threshold) for name, matrix in hazards.items()}

    head = bundle.spec.heads[0]
    probability = horizon = predicted_day = None
    if bundle.spec.task_mode == "classification":
        probability, horizon = outputs[head.name][:, 0], head.horizon
    elif bundle.spec.task_mode == "regression":
        predicted_day = outputs[head.name][:, 0] * head.bounds[-1]
        grid_name = "short" if head.name.endswith("short") else "long"
        intervals[grid_name] = snap_to_interval(GRIDS[grid_name], predicted_day)

    records = []
    for i, creative in enumerate(creatives):
        records.append(PredictionRecord(
            creative_id=creative.creative_id,
            as_of_day=as_of_day(creative, days),
            task_mode=bundle.spec.task_mode,
            threshold=threshold,
            hazards={name: matrix[i].tolist() for name, matrix in hazards.items()},
            risk_scores={name: float(values[i]) for name, values in risks.items()},
            predicted_interval={name: int(values[i]) for name, values in intervals.items()},
            probability=None if probability is None else float(probability[i]),
            horizon=horizon,
            predicted_day=None if predicted_day is None else float(predicted_day[i]),
        ))
    return records


def write_predictions(path: Union[str, Path], records: Sequence[PredictionRecord]) -> Path:
    lines = [record.model_dump_json() for record in records]
    return atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))


def read_predictions(path: Union[str, Path]) -> List[PredictionRecord]:
    with open(path, encoding="utf-8") as handle:
        return [PredictionRecord.model_validate_json(line) for line in handle if line.strip()]


def hazard_matrix(records: Sequence[PredictionRecord], grid_name: str) -> Optional[np.ndarray]:
    """Stacked hazards for a grid, or None when the records carry none"""
    if not records or any(grid_name not in r.hazards for r in records):
        return None
    return np.array([r.hazards[grid_name] for r in records], dtype=float)
