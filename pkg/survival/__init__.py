"""Discrete-time survival core: grids, labels, hazards and losses"""

from survival.grid import (
    BEYOND_GRID,
    LONG_GRID,
    MERGED_GRID,
    SHORT_GRID,
    TimeGrid,
    interval_index,
    interval_indices,
    resolve_grid,
)
from survival.labels import EventLabels, grid_truths, label_arrays, labels_from_lifetime
from survival.hazard import (
    NO_DISCONTINUATION,
    HazardVector,
    SurvivalCurve,
    decide_discontinuation,
    first_crossings,
    merge_two_term,
    merge_two_term_matrix,
    risk_score,
    risk_scores,
    survival_at,
    survival_curve,
    survival_matrix,
)
from survival.losses import (
    LossWeighting,
    likelihood,
    loss_weights,
    mtl_loss,
    negative_log_likelihood,
    nll_rows,
    nll_terms,
    weighted_loss,
)

__all__ = [
    "BEYOND_GRID",
    "LONG_GRID",
    "MERGED_GRID",
    "SHORT_GRID",
    "TimeGrid",
    "interval_index",
    "interval_indices",
    "resolve_grid",
    "EventLabels",
    "grid_truths",
    "label_arrays",
    "labels_from_lifetime",
    "NO_DISCONTINUATION",
    "HazardVector",
    "SurvivalCurve",
    "decide_discontinuation",
    "first_crossings",
    "merge_two_term",
    "merge_two_term_matrix",
    "risk_score",
    "risk_scores",
    "survival_at",
    "survival_curve",
    "survival_matrix",
    "LossWeighting",
    "likelihood",
    "loss_weights",
    "mtl_loss",
    "negative_log_likelihood",
    "nll_rows",
    "nll_terms",
    "weighted_loss",
]
