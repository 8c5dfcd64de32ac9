"""Offline evaluation protocols: CI tables, F1 comparisons and the day-ablation sweep"""

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np
import pandas as pd
from scipy.stats import spearmanr

from config.schema import ModelSection, TrainingSection
from config.settings import F1_HORIZONS, F1_THRESHOLD, TOP_SALES_FRACTION
from evaluation.metrics import (
    actual_discontinuation_order,
    actually_discontinued_by,
    concordance,
    discontinued_by,
    f1_at_horizon,
    f1_score,
    ndcg_order,
    predicted_discontinuation_order,
    top_sales_slice,
)
from evaluation.modeling import GRIDS, fit_model, hazards_on
from evaluation.report import EvalReport
from features.metadata import DatasetMetadata
from features.records import AdCreative
from survival.grid import SHORT_GRID, TimeGrid
from survival.hazard import first_crossings, risk_scores
from survival.labels import grid_truths
from utils.errors import UndefinedMetricError
from utils.logging import get_logger

logger = get_logger(__name__)


def _outcomes(creatives: Sequence[AdCreative]):
    lifetimes = np.array([c.lifetime_days for c in creatives], dtype=float)
    censored = np.array([c.censored for c in creatives], dtype=bool)
    return lifetimes, censored


def slice_label(fraction: float) -> str:
    return f"top-{fraction * 100:g}%-sales"


def grid_ci(time_grid: TimeGrid, hazards: np.ndarray, creatives: Sequence[AdCreative], **labels) -> EvalReport:
    """CI of grid risk scores against grid-capped lifetimes; undefined CI is flagged, not raised"""
    lifetimes, censored = _outcomes(creatives)
    times, events = grid_truths(time_grid, lifetimes, censored)
    try:
        result = concordance(risk_scores(time_grid, hazards), times, events)
    except UndefinedMetricError:
        return EvalReport(metric="ci", value=math.nan, n=0, flag="undefined", **labels)
    return EvalReport(metric="ci", value=result.ci, n=result.pairs, **labels)


def ci_reports(
    hazards: Dict[str, np.ndarray],
    creatives: Sequence[AdCreative],
    fraction: float = TOP_SALES_FRACTION,
    model: str = "",
    fingerprint: str = "",
) -> List[EvalReport]:
    """CI per available grid over all creatives and over the top-sales slice"""
    top_ids = {c.creative_id for c in top_sales_slice(creatives, fraction)}
    top = np.array([c.creative_id in top_ids for c in creatives])
    reports = []
    for grid_name in ("short", "long", "overall"):
        if grid_name not in hazards:
            continue
        matrix = np.asarray(hazards[grid_name])
        for slice_name, rows in (("all", np.ones(len(creatives), dtype=bool)), (slice_label(fraction), top)):
            subset = [c for c, keep in zip(creatives, rows) if keep]
            reports.append(grid_ci(
                GRIDS[grid_name], matrix[rows], subset,
                grid=grid_name, slice=slice_name, model=model, config_fingerprint=fingerprint,
            ))
    return reports


def _f1_report(result, horizon, grid_name, model, fingerprint) -> EvalReport:
    return EvalReport(
        metric=f"f1@{horizon}",
        value=result.f1,
        n=result.n,
        grid=grid_name,
        flag="undefined" if result.undefined else "",
        model=model,
        config_fingerprint=fingerprint,
    )


def horizon_grid(horizon: float, available) -> str:
    """Short grid for horizons inside it, long grid otherwise; merged grid as a fallback"""
    preferred = "short" if horizon <= SHORT_GRID.upper else "long"
    return preferred if preferred in available else "overall"


def hazard_f1_reports(
    hazards: Dict[str, np.ndarray],
    creatives: Sequence[AdCreative],
    horizons: Sequence[int] = F1_HORIZONS,
    threshold: float = F1_THRESHOLD,
    model: str = "",
    fingerprint: str = "",
) -> List[EvalReport]:
    lifetimes, censored = _outcomes(creatives)
    reports = []
    for horizon in horizons:
        grid_name = horizon_grid(horizon, hazards)
        if grid_name not in hazards:
            continue
        intervals = first_crossings(hazards[grid_name], threshold)
        result = f1_at_horizon(GRIDS[grid_name], intervals, lifetimes, censored, horizon)
        reports.append(_f1_report(result, horizon, grid_name, model, fingerprint))
    return reports


def classification_f1_report(
    probabilities: Sequence[float],
    horizon: int,
    creatives: Sequence[AdCreative],
    threshold: float = F1_THRESHOLD,
    model: str = "",
    fingerprint: str = "",
) -> EvalReport:
    lifetimes, censored = _outcomes(creatives)
    predicted = np.asarray(probabilities, dtype=float) > threshold
    result = f1_score(predicted, actually_discontinued_by(lifetimes, censored, horizon))
    return _f1_report(result, horizon, "", model, fingerprint)


def regression_f1_reports(
    grid_name: str,
    intervals: Sequence[int],
    creatives: Sequence[AdCreative],
    horizons: Sequence[int] = F1_HORIZONS,
    model: str = "",
    fingerprint: str = "",
) -> List[EvalReport]:
    """F1 at the horizons a regression model's grid reads (short: 3, 7; long: 30, 90)"""
    lifetimes, censored = _outcomes(creatives)
    grid = GRIDS[grid_name]
    reports = []
    for horizon in horizons:
        if horizon_grid(horizon, (grid_name,)) != grid_name:
            continue
        result = f1_score(discontinued_by(grid, intervals, horizon), actually_discontinued_by(lifetimes, censored, horizon))
        reports.append(_f1_report(result, horizon, grid_name, model, fingerprint))
    return reports


@dataclass(frozen=True)
class AblationRow:
    days_used: int
    ci_short: float
    ci_long: float


def day_ablation_sweep(
    model: ModelSection,
    training: TrainingSection,
    train_creatives: Sequence[AdCreative],
    validation_creatives: Sequence[AdCreative],
    test_creatives: Sequence[AdCreative],
    metadata: DatasetMetadata,
    days: Sequence[int],
) -> List[AblationRow]:
    """Multi-task CI on the short and long grids per number of days used

    d = 0 drops the series block and reads statistics at day 1; larger d
    are clipped per creative to the days it was served.
    """
    rows = []
    for d in days:
        features = [f for f in model.features if not (d == 0 and f == "series")]
        section = ModelSection.model_validate(
            {**model.model_dump(), "task_mode": "multi-task", "days_used": d, "features": features}
        )
        bundle, _ = fit_model(section, training, train_creatives, validation_creatives, metadata)
        cis = {}
        for grid_name in ("short", "long"):
            hazards = hazards_on(bundle, test_creatives, grid_name)
            cis[grid_name] = grid_ci(GRIDS[grid_name], hazards, test_creatives).value
        rows.append(AblationRow(days_used=d, ci_short=cis["short"], ci_long=cis["long"]))
        logger.info(f"Day ablation d={d}: CI short={cis['short']:.4f} long={cis['long']:.4f}")
    return rows


def ablation_trend(rows: Sequence[AblationRow]) -> Dict[str, float]:
    """Spearman rho between days used and CI, per grid"""
    days = [r.days_used for r in rows]
    trend = {}
    for grid_name in ("short", "long"):
        values = [getattr(r, f"ci_{grid_name}") for r in rows]
        if len(rows) < 2 or len(set(values)) < 2:
            trend[grid_name] = math.nan
        else:
            trend[grid_name] = float(spearmanr(days, values)[0])
    return trend


def ndcg_reports(
    ids: Sequence[str],
    hazards: Dict[str, np.ndarray],
    creatives: Sequence[AdCreative],
    threshold: float,
    model: str = "",
    fingerprint: str = "",
) -> List[EvalReport]:
    """NDCG of the predicted discontinuation order against the actual one, per grid"""
    actual = actual_discontinuation_order(creatives)
    reports = []
    for grid_name in ("short", "long", "overall"):
        if grid_name not in hazards:
            continue
        predicted = predicted_discontinuation_order(ids, hazards[grid_name], threshold)
        reports.append(EvalReport(
            metric="ndcg",
            value=ndcg_order(predicted, actual),
            n=len(ids),
            grid=grid_name,
            model=model,
            config_fingerprint=fingerprint,
        ))
    return reports


def ablation_frame(rows: Sequence[AblationRow]) -> pd.DataFrame:
    return pd.DataFrame(
        [{"days_used": r.days_used, "ci_short": r.ci_short, "ci_long": r.ci_long} for r in rows],
        columns=["days_used", "ci_short", "ci_long"],
    )


def ablation_reports(rows: Sequence[AblationRow], fingerprint: str = "") -> List[EvalReport]:
    """CI per days used and grid, then the Spearman trend of CI over days"""
    reports = []
    for r in rows:
        for grid_name in ("short", "long"):
            value = getattr(r, f"ci_{grid_name}")
            reports.append(EvalReport(
                metric="ci",
                value=value,
                grid=grid_name,
                slice=f"days={r.days_used}",
                flag="undefined" if math.isnan(value) else "",
                model="multi-task",
                config_fingerprint=fingerprint,
            ))
    for grid_name, rho in ablation_trend(rows).items():
        reports.append(EvalReport(
            metric="spearman",
            value=rho,
            n=len(rows),
            grid=grid_name,
            slice="days-vs-ci",
            flag="undefined" if math.isnan(rho) else "",
            model="multi-task",
            config_fingerprint=fingerprint,
        ))
    return reports
