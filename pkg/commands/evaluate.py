"""evaluate: CI, F1, NDCG, case studies and the day-ablation sweep"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from commands.layout import RunLayout, load_metadata, load_split, load_splits
from config.loader import config_fingerprint
from config.schema import EvaluationSection, ExperimentConfig
from evaluation.case_studies import (
    checkpoint_frame,
    checkpoint_reports,
    long_term_case_study,
    short_case_reports,
    short_term_case_study,
)
from evaluation.offline import (
    ablation_frame,
    ablation_reports,
    ci_reports,
    classification_f1_report,
    day_ablation_sweep,
    hazard_f1_reports,
    ndcg_reports,
    regression_f1_reports,
)
from evaluation.predictions import PredictionRecord, hazard_matrix, read_predictions
from evaluation.report import EvalReport, write_frame, write_reports, write_summary
from features.records import AdCreative
from storage.manifest import record_run
from utils.errors import ContractViolation, DomainError
from utils.logging import get_logger

logger = get_logger(__name__)

EVAL_MODES = ("ci", "f1", "ndcg", "case-short", "case-long", "ablation")


@dataclass
class EvaluateOutcome:
    mode: str
    reports: List[EvalReport]
    files: List[Path] = field(default_factory=list)


def align_truths(records: Sequence[PredictionRecord], creatives: Sequence[AdCreative]) -> List[AdCreative]:
    """Creatives in prediction order; both sides must hold the same ids"""
    by_id = {creative.creative_id: creative for creative in creatives}
    ids = [record.creative_id for record in records]
    if len(set(ids)) != len(ids):
        raise ContractViolation("predictions contain duplicate creative ids")
    if set(ids) != set(by_id):
        missing, extra = set(by_id) - set(ids), set(ids) - set(by_id)
        raise ContractViolation(
            f"prediction ids do not match the split: {len(missing)} without prediction, {len(extra)} unknown"
        )
    return [by_id[i] for i in ids]


def record_hazards(records: Sequence[PredictionRecord]) -> Dict[str, np.ndarray]:
    hazards = {}
    for grid_name in ("short", "long", "overall"):
        matrix = hazard_matrix(records, grid_name)
        if matrix is not None:
            hazards[grid_name] = matrix
    return hazards


def _need(hazards: Dict[str, np.ndarray], grid_name: str, mode: str) -> np.ndarray:
    if grid_name not in hazards:
        raise ContractViolation(f"{mode} needs {grid_name} hazards; the predictions have {sorted(hazards) or 'none'}")
    return hazards[grid_name]


def f1_reports(
    records: Sequence[PredictionRecord],
    creatives: Sequence[AdCreative],
    evaluation: EvaluationSection,
    model: str = "",
    fingerprint: str = "",
) -> List[EvalReport]:
    """F1 per horizon for hazard, classification and regression predictions alike"""
    task_mode = records[0].task_mode
    if task_mode == "classification":
        probabilities = [record.probability for record in records]
        horizon = int(records[0].horizon)
        return [classification_f1_report(probabilities, horizon, creatives, evaluation.f1_threshold, model, fingerprint)]
    if task_mode == "regression":
        (grid_name,) = records[0].predicted_interval
        intervals = [record.predicted_interval[grid_name] for record in records]
        return regression_f1_reports(grid_name, intervals, creatives, evaluation.horizons, model, fingerprint)
    return hazard_f1_reports(
        record_hazards(records), creatives, evaluation.horizons, evaluation.f1_threshold, model, fingerprint
    )


def evaluate_records(
    mode: str,
    records: Sequence[PredictionRecord],
    creatives: Sequence[AdCreative],
    evaluation: EvaluationSection,
    model: str = "",
    fingerprint: str = "",
) -> Tuple[List[EvalReport], Optional[pd.DataFrame]]:
    """Reports for one prediction file; case-long also returns its checkpoint table"""
    if not records:
        raise ContractViolation("no predictions to evaluate")
    creatives = align_truths(records, creatives)
    hazards = record_hazards(records)

    if mode == "ci":
        return ci_reports(hazards, creatives, evaluation.top_sales_fraction, model, fingerprint), None
    if mode == "f1":
        return f1_reports(records, creatives, evaluation, model, fingerprint), None
    if mode == "ndcg":
        ids = [record.creative_id for record in records]
        return ndcg_reports(ids, hazards, creatives, evaluation.discontinuation_threshold, model, fingerprint), None
    if mode == "case-short":
        result = short_term_case_study(creatives, _need(hazards, "short", mode), evaluation.discontinuation_threshold)
        return short_case_reports(result, model, fingerprint), None
    if mode == "case-long":
        scores = long_term_case_study(
            creatives,
            _need(hazards, "long", mode),
            evaluation.discontinuation_threshold,
            evaluation.checkpoint_every_days,
            evaluation.long_case_min_days,
        )
        return checkpoint_reports(scores, model, fingerprint), checkpoint_frame(scores)
    raise DomainError(f"unknown evaluation mode '{mode}' (known: {', '.join(EVAL_MODES)})")


def cmd_evaluate(
    config: ExperimentConfig,
    mode: str,
    predictions: Optional[str] = None,
    split: str = "test",
) -> EvaluateOutcome:
    """Evaluate a prediction file against the split's truths, or run the day-ablation sweep"""
    if mode not in EVAL_MODES:
        raise DomainError(f"unknown evaluation mode '{mode}' (known: {', '.join(EVAL_MODES)})")
    layout = RunLayout.from_config(config)
    fingerprint = config_fingerprint(config)
    files = []

    if mode == "ablation":
        parts = load_splits(layout)
        rows = day_ablation_sweep(
            config.model, config.training, parts["train"], parts["validation"], parts[split],
            load_metadata(layout), config.evaluation.ablation_days,
        )
        reports = ablation_reports(rows, fingerprint)
        files.append(write_frame(layout.report("ablation_days.csv"), ablation_frame(rows)))
    else:
        records = read_predictions(predictions or layout.predictions)
        reports, checkpoints = evaluate_records(
            mode, records, load_split(layout, split), config.evaluation, records[0].task_mode if records else "", fingerprint
        )
        if checkpoints is not None:
            files.append(write_frame(layout.report(f"{mode}_checkpoints.csv"), checkpoints))

    files.append(write_reports(layout.report(f"{mode}.csv"), reports))
    files.append(write_summary(layout.report(f"{mode}_summary.txt"), f"Evaluation: {mode} ({split} split)", reports))
    record_run(str(layout.out_dir), f"evaluate-{mode}", fingerprint, config.training.seed, files)
    flagged = sum(1 for r in reports if r.flag)
    logger.info(f"Evaluation {mode}: {len(reports)} report rows, {flagged} flagged")
    return EvaluateOutcome(mode=mode, reports=reports, files=files)
