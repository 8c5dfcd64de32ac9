"""Tests for the repro pipeline graph, its model grid and the acceptance checks"""

import pandas as pd
import pytest

from config.schema import ExperimentConfig, GeneratorConfig
from evaluation.report import EvalReport
from graph import STAGES, create_graph
from graph.acceptance import (
    AcceptanceCheck,
    case_study_checks,
    checks_frame,
    offline_checks,
    report_value,
)
from graph.models import case_study_runs, comparison_frame, model_grid
from graph.nodes import should_continue
from graph.runner import run_repro
from graph_visualization import repro_mermaid, visualize_graph
from storage import read_runs, sha256_file
from utils.errors import StageError

TOP = "top-25%-sales"


def passing_reports():
    reports = []

    def ci(model, grid, value, where="all"):
        reports.append(EvalReport(metric="ci", value=value, grid=grid, slice=where, model=model))

    ci("multi-task", "overall", 0.85)
    ci("overall", "overall", 0.80)
    ci("short", "short", 0.82)
    ci("short-stats+text", "short", 0.78)
    ci("long", "long", 0.80)
    for where in ("all", TOP):
        for grid in ("short", "long", "overall"):
            ci("multi-task-ctr", grid, 0.86, where)
            ci("multi-task", grid, 0.85, where)
    for horizon, grid in ((3, "short"), (7, "short"), (30, "long"), (90, "long")):
        metric = f"f1@{horizon}"
        reports.append(EvalReport(metric=metric, value=0.8, grid=grid, model="multi-task-ctr"))
        reports.append(EvalReport(metric=metric, value=0.5, model=f"classification-{horizon}d"))
        reports.append(EvalReport(metric=metric, value=0.6, grid=grid, model=f"regression-{grid}"))
    return reports


def checkpoints(model=0.9, rule=0.8):
    rows = []
    for day in (10, 20, 30, 40):
        for method, value in (("model", model), ("sales-order", 0.7), ("cpa-ratio-order", rule)):
            rows.append({"checkpoint_day": day, "method": method, "ndcg": value, "n": 5})
    return pd.DataFrame(rows)


def case_reports(model=1.0, human=1.1):
    return [
        EvalReport(metric="cpa-ratio-mean", value=model, grid="short", slice="model", model="case-short-multi-task"),
        EvalReport(metric="cpa-ratio-mean", value=human, grid="short", slice="human", model="case-short-multi-task"),
    ]


class TestGraphStructure:
    def test_should_continue(self):
        assert should_continue({"failed_stage": None}) == "continue"
        assert should_continue({}) == "continue"
        assert should_continue({"failed_stage": "train"}) == "end"

    def test_mermaid_names_every_stage(self):
        mermaid = repro_mermaid()
        for stage in STAGES:
            assert stage in mermaid

    def test_visualize_prints_the_diagram(self, capsys):
        visualize_graph()
        out = capsys.readouterr().out
        assert "Repro Pipeline Graph" in out and "acceptance" in out

    def test_compiles(self):
        assert set(STAGES) <= set(create_graph().get_graph().nodes)


class TestModelGrid:
    def test_offline_suite(self):
        names = [run.name for run in model_grid(ExperimentConfig(), "offline-suite")]
        for expected in ("short", "long", "overall", "multi-task", "multi-task-imp", "multi-task-ctr",
                         "short-stats+text", "short-stats+text+image", "classification-90d",
                         "regression-short", "regression-long", "case-short-multi-task", "case-long-multi-task"):
            assert expected in names
        assert len(names) == len(set(names))

    def test_case_studies_only_train_case_models(self):
        runs = model_grid(ExperimentConfig(), "case-studies")
        assert [run.role for run in runs] == ["case-short", "case-short", "case-long"]
        assert [run.model.days_used for run in runs] == [1, 1, 10]
        assert all(run.weighting == "ctr" for run in runs)

    def test_comparison_frame(self):
        runs = case_study_runs(ExperimentConfig())
        reports = [EvalReport(metric="ci", value=0.8, grid="short", model="case-short-short")]
        frame = comparison_frame(runs, reports)
        assert frame["model"].tolist() == [run.name for run in runs]
        assert "ci|short|all" in frame.columns
        assert frame.loc[frame["model"] == "case-short-short", "ci|short|all"].item() == 0.8


class TestAcceptance:
    def test_offline_checks_pass(self):
        checks = offline_checks(passing_reports(), ExperimentConfig().evaluation)
        assert all(check.passed for check in checks), [c for c in checks if not c.passed]
        assert len(checks) == 3 + 6 + 4

    def test_offline_checks_catch_regressions(self):
        reports = passing_reports()
        reports.append(EvalReport(metric="f1@90", value=0.75, model="classification-90d"))
        reports = [r for r in reports if not (r.model == "classification-90d" and r.value == 0.5)]
        failed = {c.name for c in offline_checks(reports, ExperimentConfig().evaluation) if not c.passed}
        assert failed == {"f1-90d"}

    def test_missing_reports_fail(self):
        checks = offline_checks([], ExperimentConfig().evaluation)
        assert not any(check.passed for check in checks)

    def test_case_study_checks(self):
        passed = case_study_checks(case_reports(), checkpoints())
        assert [c.passed for c in passed] == [True, True]
        failed = case_study_checks(case_reports(1.0, 1.5), checkpoints(model=0.7))
        assert [c.passed for c in failed] == [False, False]
        assert "30" in failed[1].detail and "40" in failed[1].detail

    def test_report_value_and_frame(self):
        assert report_value(case_reports(), "case-short-multi-task", "cpa-ratio-mean", "short", "human") == 1.1
        frame = checks_frame([AcceptanceCheck("a", True, "ok")])
        assert frame.to_dict("records") == [{"check": "a", "passed": True, "detail": "ok"}]


class TestRunRepro:
    def test_failed_stage_stops_the_run(self, small_config, tmp_path):
        config = small_config.model_copy(update={"generator": GeneratorConfig(n_campaigns=0)})
        with pytest.raises(StageError) as error:
            run_repro(config, "case-studies")
        assert error.value.stage == "generate"
        assert not (tmp_path / "run" / "models").exists()

    def test_case_studies_end_to_end(self, small_config, tmp_path):
        code = run_repro(small_config, "case-studies")
        assert code in (0, 2)
        reports = tmp_path / "run" / "reports"
        for name in ("case_studies.csv", "case_long_checkpoints.csv", "ablation_days.csv", "acceptance.csv", "summary.txt"):
            assert (reports / name).exists(), name
        acceptance = pd.read_csv(reports / "acceptance.csv")
        assert acceptance["check"].tolist() == ["case-short", "case-long"]
        assert (code == 0) == bool(acceptance["passed"].all())

        produced = sorted(p for d in ("reports", "predictions", "models") for p in (tmp_path / "run" / d).iterdir())
        first = {p: sha256_file(p) for p in produced}
        assert run_repro(small_config, "case-studies") == code
        assert {p: sha256_file(p) for p in produced} == first
        assert len(read_runs(str(tmp_path / "run"), "repro")) == 1
