"""The model grid trained by the repro pipeline"""

from dataclasses import dataclass
from typing import List, Sequence

import pandas as pd

from config.schema import ExperimentConfig, ModelSection, TrainingSection
from evaluation.report import EvalReport, reports_frame
from features.assemble import FeatureMask

# Feature-ablation rows, all on the single-task short model
ABLATION_FEATURES = (
    ("stats", "text"),
    ("stats", "image"),
    ("stats", "series"),
    ("stats", "text", "image"),
)

# Weighting used by the proposed model and by the baselines it is compared to
BASELINE_WEIGHTING = "ctr"


@dataclass(frozen=True)
class ModelRun:
    name: str
    model: ModelSection
    training: TrainingSection
    role: str = "offline"          # offline | case-short | case-long

    @property
    def weighting(self) -> str:
        return self.training.weighting

    @property
    def features(self) -> str:
        return FeatureMask.from_names(self.model.features).label


def _run(config: ExperimentConfig, name: str, role: str = "offline", weighting: str = "none", **model) -> ModelRun:
    section = ModelSection.model_validate({**config.model.model_dump(), **model})
    training = TrainingSection.model_validate({**config.training.model_dump(), "weighting": weighting})
    return ModelRun(name=name, model=section, training=training, role=role)


def offline_runs(config: ExperimentConfig) -> List[ModelRun]:
    """Single-task grids, multi-task per weighting, feature ablations and the baselines"""
    runs = [_run(config, task, task_mode=task) for task in ("short", "long", "overall")]
    runs.append(_run(config, "multi-task", task_mode="multi-task"))
    runs.append(_run(config, "multi-task-imp", task_mode="multi-task", weighting="impression"))
    runs.append(_run(config, "multi-task-ctr", task_mode="multi-task", weighting="ctr"))
    for features in ABLATION_FEATURES:
        label = FeatureMask.from_names(features).label
        runs.append(_run(config, f"short-{label}", task_mode="short", features=list(features)))
    for horizon in config.evaluation.horizons:
        runs.append(_run(
            config, f"classification-{horizon}d", task_mode="classification", horizon=horizon,
            weighting=BASELINE_WEIGHTING,
        ))
    for term in ("short", "long"):
        runs.append(_run(
            config, f"regression-{term}", task_mode="regression", regression_term=term,
            weighting=BASELINE_WEIGHTING,
        ))
    return runs


def case_study_runs(config: ExperimentConfig) -> List[ModelRun]:
    """Day-1 models for the short case study and a 10-day multi-task model for the long one"""
    evaluation = config.evaluation
    return [
        _run(config, "case-short-multi-task", "case-short", BASELINE_WEIGHTING,
             task_mode="multi-task", days_used=evaluation.short_case_days_used),
        _run(config, "case-short-short", "case-short", BASELINE_WEIGHTING,
             task_mode="short", days_used=evaluation.short_case_days_used),
        _run(config, "case-long-multi-task", "case-long", BASELINE_WEIGHTING,
             task_mode="multi-task", days_used=evaluation.long_case_min_days),
    ]


def model_grid(config: ExperimentConfig, preset: str) -> List[ModelRun]:
    if preset == "case-studies":
        return case_study_runs(config)
    return offline_runs(config) + case_study_runs(config)


def comparison_frame(runs: Sequence[ModelRun], reports: Sequence[EvalReport]) -> pd.DataFrame:
    """One row per trained model, one column per (metric, grid, slice)"""
    info = pd.DataFrame(
        [
            {
                "model": run.name,
                "task_mode": run.model.task_mode,
                "weighting": run.weighting,
                "features": run.features,
                "days_used": run.model.days_used,
            }
            for run in runs
        ],
        columns=["model", "task_mode", "weighting", "features", "days_used"],
    )
    frame = reports_frame(reports)
    if frame.empty:
        return info
    frame["column"] = frame["metric"] + "|" + frame["grid"] + "|" + frame["slice"]
    wide = frame.pivot(index="model", columns="column", values="value").reset_index()
    wide.columns.name = None
    return info.merge(wide, on="model", how="left")
