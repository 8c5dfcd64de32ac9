"""End-to-end tests for the generate / train / predict / evaluate commands, configs and main()"""

import json
from pathlib import Path

import pandas as pd
import pytest

from commands import EVAL_MODES, RunLayout, cmd_evaluate, cmd_generate, cmd_predict, cmd_train, load_split
from config.loader import apply_overrides, config_fingerprint, load_config, validate_config
from config.presets import repro_preset
from config.schema import ExperimentConfig
from evaluation.predictions import read_predictions
from main import main
from storage import read_runs, sha256_file
from utils.errors import ConfigError, ContractViolation, DomainError

DEFAULT_TOML = Path(__file__).parent / "configs" / "default.toml"


@pytest.fixture(autouse=True)
def log_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("AD_SURVIVAL_LOG_DIR", str(tmp_path / "logs"))


@pytest.fixture
def generated(small_config):
    cmd_generate(small_config)
    return small_config


@pytest.fixture
def trained(generated):
    cmd_train(generated)
    return generated


@pytest.fixture
def predicted(trained):
    cmd_predict(trained)
    return trained


def write_config(path: Path, config: ExperimentConfig) -> Path:
    path.write_text(json.dumps(config.model_dump(mode="json")))
    return path


class TestGenerateCommand:
    def test_writes_the_dataset(self, small_config):
        outcome = cmd_generate(small_config)
        layout = RunLayout.from_config(small_config)
        for name in ("train.jsonl", "validation.jsonl", "test.jsonl", "daily.csv", "oracle.jsonl",
                     "splits.json", "metadata.json", "shares.csv", "summary.txt"):
            assert (layout.dataset_dir / name).exists(), name
        assert sum(outcome.split_sizes.values()) == sum(len(load_split(layout, s)) for s in outcome.split_sizes)
        assert set(outcome.lifetime_shares) == {"[0,3)", "[3,7)", "[7,inf)"}
        assert "lifetime" in outcome.summary

    def test_splits_keep_campaigns_whole(self, generated):
        layout = RunLayout.from_config(generated)
        campaigns = [{c.campaign_id for c in load_split(layout, s)} for s in ("train", "validation", "test")]
        assert not campaigns[0] & campaigns[1] and not campaigns[0] & campaigns[2] and not campaigns[1] & campaigns[2]

    def test_rerun_is_byte_identical(self, small_config):
        first = {str(p): sha256_file(p) for p in cmd_generate(small_config).files}
        second = {str(p): sha256_file(p) for p in cmd_generate(small_config).files}
        assert first == second
        runs = read_runs(small_config.paths.out_dir, "generate")
        assert len(runs) == 1
        assert set(runs[0]["files"].values()) == set(first.values())

    def test_missing_dataset(self, small_config):
        with pytest.raises(FileNotFoundError, match="generate"):
            cmd_train(small_config)


class TestTrainCommand:
    def test_checkpoint_and_trace(self, generated):
        outcome = cmd_train(generated)
        assert outcome.checkpoint.exists()
        trace = pd.read_csv(outcome.trace_file)
        assert list(trace.columns) == ["epoch", "train_loss", "val_loss"]
        assert len(trace) == generated.training.epochs
        assert outcome.heads == ["short(4)", "long(5)"]

    def test_rerun_is_byte_identical(self, generated):
        first = sha256_file(cmd_train(generated).checkpoint)
        assert sha256_file(cmd_train(generated).checkpoint) == first
        assert len(read_runs(generated.paths.out_dir, "train")) == 1

    def test_npz_checkpoint(self, generated):
        config = validate_config({
            **generated.model_dump(mode="json"),
            "training": {**generated.training.model_dump(mode="json"), "checkpoint_format": "npz"},
        })
        outcome = cmd_train(config)
        assert outcome.checkpoint.suffix == ".npz"
        assert cmd_predict(config).n > 0


class TestPredictCommand:
    def test_one_record_per_creative(self, trained):
        outcome = cmd_predict(trained)
        test = load_split(RunLayout.from_config(trained), "test")
        records = read_predictions(outcome.predictions)
        assert [r.creative_id for r in records] == [c.creative_id for c in test]
        assert outcome.as_of_day == trained.model.days_used
        assert all(set(r.hazards) == {"short", "long", "overall"} for r in records)

    def test_as_of_day_and_output(self, trained, tmp_path):
        outcome = cmd_predict(trained, split="validation", as_of_day=1, output=str(tmp_path / "day1.jsonl"))
        assert outcome.predictions == tmp_path / "day1.jsonl"
        assert {r.as_of_day for r in read_predictions(outcome.predictions)} == {1}

    def test_invalid_threshold(self, trained):
        with pytest.raises(DomainError):
            cmd_predict(trained, threshold=1.0)


class TestEvaluateCommand:
    @pytest.mark.parametrize("mode", ["ci", "f1", "ndcg", "case-short", "case-long"])
    def test_modes_write_reports(self, predicted, mode):
        outcome = cmd_evaluate(predicted, mode)
        layout = RunLayout.from_config(predicted)
        frame = pd.read_csv(layout.report(f"{mode}.csv"))
        assert len(frame) == len(outcome.reports) > 0
        assert layout.report(f"{mode}_summary.txt").exists()
        assert read_runs(predicted.paths.out_dir, f"evaluate-{mode}")

    def test_ci_reports_every_grid(self, predicted):
        reports = cmd_evaluate(predicted, "ci").reports
        assert {r.grid for r in reports} == {"short", "long", "overall"}
        assert all(0.0 <= r.value <= 1.0 for r in reports if not r.flag)

    def test_case_long_writes_checkpoints(self, predicted):
        cmd_evaluate(predicted, "case-long")
        frame = pd.read_csv(RunLayout.from_config(predicted).report("case-long_checkpoints.csv"))
        assert list(frame.columns) == ["checkpoint_day", "method", "ndcg", "n"]

    def test_ablation(self, generated):
        outcome = cmd_evaluate(generated, "ablation")
        frame = pd.read_csv(RunLayout.from_config(generated).report("ablation_days.csv"))
        assert frame["days_used"].tolist() == [0, 1]
        assert {r.metric for r in outcome.reports} == {"ci", "spearman"}

    def test_predictions_must_match_the_split(self, predicted):
        with pytest.raises(ContractViolation):
            cmd_evaluate(predicted, "ci", split="validation")

    def test_unknown_mode(self, predicted):
        assert "ci" in EVAL_MODES
        with pytest.raises(DomainError):
            cmd_evaluate(predicted, "auc")


class TestConfig:
    def test_default_toml_loads(self):
        config = load_config(DEFAULT_TOML)
        assert config.training.weighting == "ctr"
        assert config.generator.horizon_days == 120

    def test_no_path_gives_defaults(self):
        assert load_config() == ExperimentConfig()

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="seeds"):
            validate_config({"generator": {"seeds": 1}})

    def test_schema_version(self):
        with pytest.raises(ConfigError):
            validate_config({"schema_version": 2})

    def test_missing_or_unparsable_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.toml")
        broken = tmp_path / "broken.json"
        broken.write_text("{")
        with pytest.raises(ConfigError):
            load_config(broken)

    def test_overrides_and_fingerprint(self, small_config):
        changed = apply_overrides(small_config, seed=9, threads=4)
        assert changed.generator.seed == changed.training.seed == 9
        assert changed.threads == 4
        assert config_fingerprint(small_config) == config_fingerprint(small_config.model_copy())
        assert config_fingerprint(changed) != config_fingerprint(small_config)
        with pytest.raises(ConfigError):
            apply_overrides(small_config, threads=0)

    def test_repro_presets(self):
        assert repro_preset("case-studies").evaluation.ablation_days == []
        with pytest.raises(ConfigError):
            repro_preset("everything")


class TestMain:
    def test_full_cli_run(self, small_config, tmp_path, capsys):
        path = write_config(tmp_path / "config.json", small_config)
        assert main(["generate", "--config", str(path)]) == 0
        assert main(["train", "--config", str(path)]) == 0
        assert main(["predict", "--config", str(path), "--threshold", "0.8"]) == 0
        assert main(["evaluate", "--config", str(path), "--mode", "ci"]) == 0
        assert "Evaluation: ci" in capsys.readouterr().out

    def test_errors_exit_with_one(self, tmp_path, capsys):
        assert main(["train", "--out-dir", str(tmp_path / "empty")]) == 1
        assert "Error:" in capsys.readouterr().err

    def test_invalid_config_exits_with_one(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"training": {"epochs": -1}}))
        assert main(["generate", "--config", str(path)]) == 1
        assert "training.epochs" in capsys.readouterr().err

    def test_malformed_split_exits_with_one(self, small_config, tmp_path, capsys):
        path = write_config(tmp_path / "config.json", small_config)
        assert main(["generate", "--config", str(path)]) == 0
        RunLayout.from_config(small_config).split_file("train").write_text('{"creative_id": 7}\n')
        assert main(["train", "--config", str(path)]) == 1
        assert "Error:" in capsys.readouterr().err

    def test_out_dir_override(self, small_config, tmp_path):
        path = write_config(tmp_path / "config.json", small_config)
        assert main(["generate", "--config", str(path), "--out-dir", str(tmp_path / "other")]) == 0
        assert (tmp_path / "other" / "dataset" / "metadata.json").exists()
