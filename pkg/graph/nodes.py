"""Node functions for the repro pipeline graph"""

from pathlib import Path

from commands.evaluate import evaluate_records
from commands.generate import cmd_generate
from commands.layout import RunLayout, load_metadata, load_split, load_splits
from commands.train import trace_frame
from evaluation.case_studies import checkpoint_frame
from evaluation.modeling import fit_model, load_bundle, save_bundle
from evaluation.offline import ablation_frame, ablation_reports, day_ablation_sweep
from evaluation.predictions import predict_records, read_predictions, write_predictions
from evaluation.report import summary_text, write_frame, write_reports
from graph.acceptance import case_study_checks, checks_frame, offline_checks
from graph.models import comparison_frame, model_grid
from graph.state import ReproState
from storage.files import atomic_write_text
from storage.manifest import record_run
from utils.logging import get_logger

logger = get_logger(__name__)


def _failed(stage: str, error: Exception) -> dict:
    logger.error(f"Stage {stage} failed: {error}")
    print(f"\n[{stage}] failed: {error}")
    return {"failed_stage": stage, "error": str(error)}


def _layout(state: ReproState) -> RunLayout:
    return RunLayout.from_config(state["config"])


def should_continue(state: ReproState) -> str:
    """Stop the pipeline as soon as a stage has failed"""
    if state.get("failed_stage"):
        return "end"
    return "continue"


def generate_node(state: ReproState) -> dict:
    print("\n[generate] Generating synthetic dataset...")
    try:
        outcome = cmd_generate(state["config"])
    except Exception as e:
        return _failed("generate", e)
    print(outcome.summary, end="")
    return {"dataset_files": [str(path) for path in outcome.files]}


def train_node(state: ReproState) -> dict:
    config = state["config"]
    layout = _layout(state)
    suffix = ".npz" if config.training.checkpoint_format == "npz" else ".json"
    checkpoints = {}
    try:
        metadata = load_metadata(layout)
        parts = load_splits(layout)
        runs = model_grid(config, state["preset"])
        for i, run in enumerate(runs, 1):
            print(f"[train] ({i}/{len(runs)}) {run.name}")
            bundle, result = fit_model(run.model, run.training, parts["train"], parts["validation"], metadata)
            path = save_bundle(layout.out_dir / "models" / f"{run.name}{suffix}", bundle, state["fingerprint"])
            write_frame(layout.out_dir / "models" / f"{run.name}_trace.csv", trace_frame(result.trace))
            checkpoints[run.name] = str(path)
    except Exception as e:
        return _failed("train", e)
    return {"checkpoints": checkpoints}


def predict_node(state: ReproState) -> dict:
    config = state["config"]
    layout = _layout(state)
    predictions = {}
    try:
        test = load_split(layout, "test")
        for name, checkpoint in state["checkpoints"].items():
            bundle = load_bundle(checkpoint)
            records = predict_records(bundle, test, threshold=config.evaluation.discontinuation_threshold)
            path = write_predictions(layout.out_dir / "predictions" / f"{name}.jsonl", records)
            predictions[name] = str(path)
        print(f"[predict] {len(predictions)} prediction files for {len(test)} test creatives")
    except Exception as e:
        return _failed("predict", e)
    return {"predictions": predictions}


def evaluate_node(state: ReproState) -> dict:
    config = state["config"]
    evaluation = config.evaluation
    fingerprint = state["fingerprint"]
    layout = _layout(state)
    runs = model_grid(config, state["preset"])
    roles = {run.name: run.role for run in runs}
    offline, cases, checkpoints = [], [], checkpoint_frame([])
    files = []
    try:
        test = load_split(layout, "test")
        for name, path in state["predictions"].items():
            records = read_predictions(path)
            if roles[name] == "offline":
                for mode in ("ci", "f1"):
                    offline.extend(evaluate_records(mode, records, test, evaluation, name, fingerprint)[0])
            else:
                reports, frame = evaluate_records(roles[name], records, test, evaluation, name, fingerprint)
                cases.extend(reports)
                if frame is not None:
                    checkpoints = frame

        ablation = []
        if evaluation.ablation_days:
            print(f"[evaluate] Day ablation over {evaluation.ablation_days}")
            parts = load_splits(layout)
            rows = day_ablation_sweep(
                config.model, config.training, parts["train"], parts["validation"], parts["test"],
                load_metadata(layout), evaluation.ablation_days,
            )
            ablation = ablation_reports(rows, fingerprint)
            files.append(write_frame(layout.report("ablation_days.csv"), ablation_frame(rows)))
            files.append(write_reports(layout.report("ablation.csv"), ablation))

        if offline:
            offline_runs = [run for run in runs if run.role == "offline"]
            files.append(write_reports(layout.report("offline.csv"), offline))
            files.append(write_frame(layout.report("comparison.csv"), comparison_frame(offline_runs, offline)))
        files.append(write_reports(layout.report("case_studies.csv"), cases))
        files.append(write_frame(layout.report("case_long_checkpoints.csv"), checkpoints))

        summary = "".join(
            summary_text(title, reports)
            for title, reports in (("Offline evaluation", offline), ("Case studies", cases), ("Day ablation", ablation))
            if reports
        )
        files.append(atomic_write_text(layout.report("summary.txt"), summary))
        print(summary, end="")
    except Exception as e:
        return _failed("evaluate", e)
    return {
        "reports": offline + cases + ablation,
        "case_long_checkpoints": checkpoints,
        "report_files": [str(path) for path in files],
    }


def acceptance_node(state: ReproState) -> dict:
    config = state["config"]
    layout = _layout(state)
    try:
        checks = []
        if state["preset"] == "offline-suite":
            checks.extend(offline_checks(state["reports"], config.evaluation))
        checks.extend(case_study_checks(state["reports"], state["case_long_checkpoints"]))
        path = write_frame(layout.report("acceptance.csv"), checks_frame(checks))

        produced = [Path(p) for p in state["report_files"]] + [path]
        produced += [Path(p) for p in state["predictions"].values()]
        produced += [Path(p) for p in state["checkpoints"].values()]
        record_run(str(layout.out_dir), "repro", state["fingerprint"], config.training.seed, produced)
    except Exception as e:
        return _failed("acceptance", e)

    print("\n[acceptance]")
    for check in checks:
        print(f"  {'PASS' if check.passed else 'FAIL'}  {check.name:<28} {check.detail}")
    passed = all(check.passed for check in checks)
    logger.info(f"Acceptance: {sum(c.passed for c in checks)}/{len(checks)} checks passed")
    return {"checks": checks, "acceptance_passed": passed}
