"""Metrics, case studies and report emission"""

from evaluation.metrics import (
    ConcordanceResult,
    F1Result,
    RankedPrediction,
    actual_discontinuation_order,
    concordance,
    concordance_index,
    cpa_ratio,
    discontinued_by,
    f1_at_horizon,
    f1_score,
    ndcg_order,
    predicted_discontinuation_order,
    ranked_concordance,
    top_sales_slice,
)
from evaluation.case_studies import (
    CheckpointScore,
    RatioSummary,
    ShortCaseStudy,
    case_study_ratios,
    checkpoint_ndcgs,
    long_term_case_study,
    predicted_days,
    short_term_case_study,
)
from evaluation.offline import (
    AblationRow,
    ablation_trend,
    ci_reports,
    classification_f1_report,
    day_ablation_sweep,
    hazard_f1_reports,
    regression_f1_reports,
)
from evaluation.report import EvalReport, summary_text, write_frame, write_reports, write_summary

__all__ = [
    "ConcordanceResult",
    "F1Result",
    "RankedPrediction",
    "actual_discontinuation_order",
    "concordance",
    "concordance_index",
    "cpa_ratio",
    "discontinued_by",
    "f1_at_horizon",
    "f1_score",
    "ndcg_order",
    "predicted_discontinuation_order",
    "ranked_concordance",
    "top_sales_slice",
    "CheckpointScore",
    "RatioSummary",
    "ShortCaseStudy",
    "case_study_ratios",
    "checkpoint_ndcgs",
    "long_term_case_study",
    "predicted_days",
    "short_term_case_study",
    "AblationRow",
    "ablation_trend",
    "ci_reports",
    "classification_f1_report",
    "day_ablation_sweep",
    "hazard_f1_reports",
    "regression_f1_reports",
    "EvalReport",
    "summary_text",
    "write_frame",
    "write_reports",
    "write_summary",
]
