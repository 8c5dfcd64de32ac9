"""Directional checks the repro run must pass"""

import math
from dataclasses import dataclass
from typing import List, Sequence

import pandas as pd

from config.schema import EvaluationSection
from evaluation.offline import slice_label
from evaluation.report import EvalReport
from survival.grid import SHORT_GRID

MTL_OVERALL_MARGIN = 0.03
ABSOLUTE_CI_FLOOR = 0.75
LONG_HORIZON_F1_MARGIN = 0.10
CASE_SHORT_TOLERANCE = 0.15
CASE_LONG_FROM_DAY = 30


@dataclass(frozen=True)
class AcceptanceCheck:
    name: str
    passed: bool
    detail: str


def report_value(reports: Sequence[EvalReport], model: str, metric: str, grid: str = "", slice: str = "all") -> float:
    for r in reports:
        if r.model == model and r.metric == metric and r.grid == grid and r.slice == slice:
            return r.value
    return math.nan


def _check(name: str, passed: bool, detail: str) -> AcceptanceCheck:
    return AcceptanceCheck(name=name, passed=bool(passed), detail=detail)


def offline_checks(reports: Sequence[EvalReport], evaluation: EvaluationSection) -> List[AcceptanceCheck]:
    """Multi-task vs single-task, feature ablation, CTR weighting and baseline F1"""
    ci = lambda model, grid, where="all": report_value(reports, model, "ci", grid, where)
    checks = []

    mtl, single = ci("multi-task", "overall"), ci("overall", "overall")
    checks.append(_check(
        "multi-task-overall", mtl - single >= MTL_OVERALL_MARGIN,
        f"multi-task {mtl:.4f} vs single-task {single:.4f} (margin {MTL_OVERALL_MARGIN})",
    ))

    full, reduced = ci("short", "short"), ci("short-stats+text", "short")
    checks.append(_check("all-features", full >= reduced, f"all {full:.4f} vs stats+text {reduced:.4f}"))

    short, long = ci("short", "short"), ci("long", "long")
    checks.append(_check(
        "absolute-ci", short >= ABSOLUTE_CI_FLOOR and long >= ABSOLUTE_CI_FLOOR,
        f"short {short:.4f}, long {long:.4f} (floor {ABSOLUTE_CI_FLOOR})",
    ))

    for where in ("all", slice_label(evaluation.top_sales_fraction)):
        for grid in ("short", "long", "overall"):
            weighted, plain = ci("multi-task-ctr", grid, where), ci("multi-task", grid, where)
            checks.append(_check(
                f"ctr-weighting-{grid}-{where}", weighted >= plain, f"ctr {weighted:.4f} vs none {plain:.4f}"
            ))

    for horizon in evaluation.horizons:
        metric = f"f1@{horizon}"
        grid = "short" if horizon <= SHORT_GRID.upper else "long"
        hazard = report_value(reports, "multi-task-ctr", metric, grid, "all")
        classification = report_value(reports, f"classification-{horizon}d", metric, "", "all")
        regression = report_value(reports, f"regression-{grid}", metric, grid, "all")
        margin = LONG_HORIZON_F1_MARGIN if horizon > SHORT_GRID.upper else 0.0
        best = max(classification, regression)
        passed = hazard > classification and hazard > regression and hazard - best >= margin
        checks.append(_check(
            f"f1-{horizon}d", passed,
            f"hazard {hazard:.4f}, classification {classification:.4f}, regression {regression:.4f}",
        ))
    return checks


def case_study_checks(reports: Sequence[EvalReport], checkpoints: pd.DataFrame) -> List[AcceptanceCheck]:
    """Model CPA ratio close to the actual stop days; model ordering at least as good as the CPA rule"""
    model = report_value(reports, "case-short-multi-task", "cpa-ratio-mean", "short", "model")
    human = report_value(reports, "case-short-multi-task", "cpa-ratio-mean", "short", "human")
    checks = [_check(
        "case-short", abs(model - human) <= CASE_SHORT_TOLERANCE,
        f"model {model:.4f} vs human {human:.4f} (tolerance {CASE_SHORT_TOLERANCE})",
    )]

    late = checkpoints[(checkpoints["checkpoint_day"] >= CASE_LONG_FROM_DAY) & (checkpoints["n"] > 0)]
    table = late.pivot(index="checkpoint_day", columns="method", values="ndcg")
    losing = [int(day) for day, row in table.iterrows() if not row["model"] >= row["cpa-ratio-order"]]
    checks.append(_check(
        "case-long", not table.empty and not losing,
        f"{len(table)} checkpoints from day {CASE_LONG_FROM_DAY}; model behind the CPA rule at {losing or 'none'}",
    ))
    return checks


def checks_frame(checks: Sequence[AcceptanceCheck]) -> pd.DataFrame:
    return pd.DataFrame(
        [{"check": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
        columns=["check", "passed", "detail"],
    )
