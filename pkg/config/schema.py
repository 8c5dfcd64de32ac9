"""Experiment config document (pydantic v2, unknown keys rejected)"""

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config.settings import (
    BATCH_SIZE,
    CHECKPOINT_EVERY_DAYS,
    DAYS_USED,
    DISCONTINUATION_THRESHOLD,
    EPOCHS,
    F1_HORIZONS,
    F1_THRESHOLD,
    IMAGE_EMBEDDING_DIM,
    LEARNING_RATE,
    LONG_BOUNDS,
    LONG_CASE_MIN_DAYS,
    MTL_LAMBDA,
    SCHEMA_VERSION,
    TEXT_EMBEDDING_DIM,
    TOP_SALES_FRACTION,
    TRUNK_LAYERS,
)

# Probabilities of cut-out day 1..10; with cutout_fraction 0.9 the lifetime
# mix over [0,3), [3,7), [7,inf) is 42.66% / 38.72% / 18.62% in expectation
CUTOUT_DAY_WEIGHTS = (0.27, 0.204, 0.14, 0.115, 0.095, 0.0802, 0.035, 0.026, 0.020, 0.0148)
DEFAULT_GENRES = ("apparel", "beauty", "finance", "food", "games", "health", "media", "travel")


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GeneratorConfig(Section):
    """Synthetic campaign generator; scales are arbitrary but fixed constants"""
    seed: int = 42
    n_campaigns: int = Field(500, ge=0)
    creatives_per_campaign: Tuple[int, int] = (5, 15)
    cutout_fraction: float = Field(0.90, ge=0.0, le=1.0)
    cutout_day_weights: Tuple[float, ...] = CUTOUT_DAY_WEIGHTS
    quality_sigma: float = Field(0.3, ge=0.0)
    quality_lifetime_correlation: float = Field(0.8, ge=0.0, le=1.0)
    base_ctr_median: float = Field(0.02, gt=0.0, le=1.0)
    base_ctr_sigma: float = Field(0.25, ge=0.0)
    cutout_ctr_factor: float = Field(0.7, gt=0.0, le=1.0)
    wearout_decay: Tuple[float, float] = (0.95, 0.997)
    wearout_start_ratio: Tuple[float, float] = (0.55, 0.95)
    cutout_ratio: Tuple[float, float] = (0.6, 0.95)
    cutout_jump: float = Field(3.5, gt=3.0)
    cpa_threshold: float = Field(1.2, gt=0.0)
    target_cpa: Tuple[float, float] = (20.0, 80.0)
    cost_per_click_median: float = Field(1.0, gt=0.0)
    daily_impressions_median: float = Field(2000.0, gt=0.0)
    impression_sigma: float = Field(0.5, ge=0.0)
    sales_value_median: float = Field(50.0, gt=0.0)
    sales_value_sigma: float = Field(0.6, ge=0.0)
    embedding_signal: float = Field(1.0, ge=0.0)
    text_dim: int = Field(TEXT_EMBEDDING_DIM, ge=1)
    image_dim: int = Field(IMAGE_EMBEDDING_DIM, ge=1)
    genres: Tuple[str, ...] = DEFAULT_GENRES
    horizon_days: int = Field(120, ge=int(LONG_BOUNDS[-1]))
    censor_at_horizon: bool = True

    @field_validator("creatives_per_campaign")
    @classmethod
    def _check_range(cls, value):
        low, high = value
        if low < 1 or high < low:
            raise ValueError("creatives_per_campaign must be a range with 1 <= low <= high")
        return value

    @field_validator("cutout_day_weights")
    @classmethod
    def _check_weights(cls, value):
        if len(value) != 10 or any(w < 0 for w in value) or sum(value) <= 0:
            raise ValueError("cutout_day_weights needs 10 non-negative weights for days 1..10")
        return value

    @field_validator("wearout_decay", "wearout_start_ratio", "cutout_ratio", "target_cpa")
    @classmethod
    def _check_interval(cls, value):
        low, high = value
        if not 0 < low <= high:
            raise ValueError("ranges must satisfy 0 < low <= high")
        return value

    @model_validator(mode="after")
    def _check_mechanisms(self):
        if self.wearout_decay[1] >= 1.0:
            raise ValueError("wearout_decay must stay below 1")
        if self.wearout_start_ratio[1] >= 1.0 or self.cutout_ratio[1] >= 1.0:
            raise ValueError("pre-discontinuation CPA ratios must stay below the threshold (ratio < 1)")
        if not self.genres:
            raise ValueError("at least one genre is required")
        return self


class ModelSection(Section):
    task_mode: Literal["short", "long", "overall", "multi-task", "classification", "regression"] = "multi-task"
    features: List[Literal["text", "image", "stats", "series"]] = ["text", "image", "stats", "series"]
    days_used: int = Field(DAYS_USED, ge=0)
    trunk_layers: List[Tuple[int, Literal["relu", "tanh", "linear", "sigmoid"]]] = list(TRUNK_LAYERS)
    horizon: Optional[int] = None
    regression_term: Literal["short", "long"] = "short"

    @model_validator(mode="after")
    def _check_heads(self):
        if self.task_mode == "classification" and self.horizon not in F1_HORIZONS:
            raise ValueError(f"classification models need a horizon in {F1_HORIZONS}")
        if self.days_used == 0 and "series" in self.features:
            raise ValueError("days_used = 0 requires the series block to be disabled")
        return self


class TrainingSection(Section):
    batch_size: int = Field(BATCH_SIZE, ge=1)
    epochs: int = Field(EPOCHS, ge=0)
    lr: float = Field(LEARNING_RATE, gt=0.0)
    seed: int = 42
    weighting: Literal["none", "ctr", "impression"] = "none"
    lam: float = Field(MTL_LAMBDA, ge=0.0, le=1.0)
    checkpoint_format: Literal["json", "npz"] = "json"


class EvaluationSection(Section):
    discontinuation_threshold: float = Field(DISCONTINUATION_THRESHOLD, gt=0.0, lt=1.0)
    f1_threshold: float = Field(F1_THRESHOLD, gt=0.0, lt=1.0)
    horizons: List[int] = list(F1_HORIZONS)
    top_sales_fraction: float = Field(TOP_SALES_FRACTION, gt=0.0, le=1.0)
    checkpoint_every_days: int = Field(CHECKPOINT_EVERY_DAYS, ge=1)
    long_case_min_days: int = Field(LONG_CASE_MIN_DAYS, ge=1)
    short_case_days_used: int = Field(1, ge=1)
    ablation_days: List[int] = [0, 1, 2, 3, 5, 7, 10]

    @field_validator("horizons")
    @classmethod
    def _check_horizons(cls, value):
        if any(h not in F1_HORIZONS for h in value):
            raise ValueError(f"horizons must be drawn from {F1_HORIZONS}")
        return value


class PathsSection(Section):
    out_dir: str = "runs/default"
    dataset_dir: str = "dataset"
    checkpoint: str = "model.json"
    predictions: str = "predictions.jsonl"
    report_dir: str = "reports"


class ExperimentConfig(Section):
    schema_version: int = SCHEMA_VERSION
    generator: GeneratorConfig = GeneratorConfig()
    model: ModelSection = ModelSection()
    training: TrainingSection = TrainingSection()
    evaluation: EvaluationSection = EvaluationSection()
    paths: PathsSection = PathsSection()
    threads: int = Field(1, ge=1)

    @field_validator("schema_version")
    @classmethod
    def _check_version(cls, value):
        if value != SCHEMA_VERSION:
            raise ValueError(f"config schema version {value} is not supported (expected {SCHEMA_VERSION})")
        return value
