"""Command implementations behind the main.py subcommands"""

from commands.layout import RunLayout, load_metadata, load_split, load_splits
from commands.generate import GenerateOutcome, cmd_generate
from commands.train import TrainOutcome, cmd_train
from commands.predict import PredictOutcome, cmd_predict
from commands.evaluate import EVAL_MODES, EvaluateOutcome, cmd_evaluate, evaluate_records

__all__ = [
    "RunLayout",
    "load_metadata",
    "load_split",
    "load_splits",
    "GenerateOutcome",
    "cmd_generate",
    "TrainOutcome",
    "cmd_train",
    "PredictOutcome",
    "cmd_predict",
    "EVAL_MODES",
    "EvaluateOutcome",
    "cmd_evaluate",
    "evaluate_records",
]
