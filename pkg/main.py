"""Main entry point for the ad creative discontinuation toolkit"""

import argparse
import sys
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from commands import EVAL_MODES, cmd_evaluate, cmd_generate, cmd_predict, cmd_train
from config.loader import apply_overrides, load_config
from config.presets import REPRO_PRESETS, repro_preset
from config.settings import SPLIT_NAMES
from evaluation.report import summary_text
from graph.runner import run_repro
from utils.errors import (
    ConfigError,
    ContractViolation,
    DomainError,
    StageError,
    TrainingError,
    UndefinedMetricError,
)
from utils.logging import get_logger, setup_logging

KNOWN_ERRORS = (
    ConfigError,
    ContractViolation,
    DomainError,
    StageError,
    TrainingError,
    UndefinedMetricError,
    ValidationError,
    OSError,
)


def _global_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="TOML or JSON experiment config (defaults when omitted)")
    parser.add_argument("--seed", type=int, help="override generator and training seeds")
    parser.add_argument("--out-dir", help="override the output directory")
    parser.add_argument("--threads", type=int, help="override the thread count recorded in the config")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Ad creative discontinuation survival toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    _global_flags(sub.add_parser("generate", help="generate the synthetic dataset and split"))
    _global_flags(sub.add_parser("train", help="train the configured model"))

    predict = sub.add_parser("predict", help="predict hazards for a dataset split")
    _global_flags(predict)
    predict.add_argument("--checkpoint", help="checkpoint path (default: the configured one)")
    predict.add_argument("--split", choices=SPLIT_NAMES, default="test")
    predict.add_argument("--as-of-day", type=int, help="last day of data read (default: the trained days_used)")
    predict.add_argument("--threshold", type=float, help="discontinuation threshold (default 0.9)")
    predict.add_argument("--output", help="predictions JSONL path")

    evaluate = sub.add_parser("evaluate", help="evaluate predictions or run the day ablation")
    _global_flags(evaluate)
    evaluate.add_argument("--mode", choices=EVAL_MODES, required=True)
    evaluate.add_argument("--predictions", help="predictions JSONL (default: the configured one)")
    evaluate.add_argument("--split", choices=SPLIT_NAMES, default="test")

    repro = sub.add_parser("repro", help="run the whole pipeline with acceptance checks")
    _global_flags(repro)
    repro.add_argument("preset", choices=REPRO_PRESETS)
    return parser


def _config(args):
    if args.command == "repro":
        if args.config:
            print(f"Note: repro uses the '{args.preset}' preset; --config is ignored")
        config = repro_preset(args.preset)
    else:
        config = load_config(args.config)
    return apply_overrides(config, seed=args.seed, out_dir=args.out_dir, threads=args.threads)


def run(args) -> int:
    config = _config(args)

    if args.command == "generate":
        outcome = cmd_generate(config)
        print(outcome.summary, end="")
        print(f"Dataset written to {config.paths.out_dir}")
    elif args.command == "train":
        outcome = cmd_train(config)
        print(f"Checkpoint {outcome.checkpoint} (best epoch {outcome.best_epoch}, heads {', '.join(outcome.heads)})")
        print(f"Loss trace {outcome.trace_file}")
    elif args.command == "predict":
        outcome = cmd_predict(config, args.checkpoint, args.split, args.as_of_day, args.threshold, args.output)
        print(f"{outcome.n} predictions (as-of day {outcome.as_of_day}) written to {outcome.predictions}")
    elif args.command == "evaluate":
        outcome = cmd_evaluate(config, args.mode, args.predictions, args.split)
        print(summary_text(f"Evaluation: {args.mode}", outcome.reports), end="")
    else:
        return run_repro(config, args.preset)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    # Load environment variables
    load_dotenv()

    args = build_parser().parse_args(argv)

    # Setup logging
    setup_logging()
    logger = get_logger()

    try:
        return run(args)
    except KNOWN_ERRORS as e:
        message = str(e)
        if isinstance(e, TrainingError) and e.last_finite_epoch is not None:
            message += f" (last finite epoch: {e.last_finite_epoch})"
        logger.error(message)
        print(f"Error: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
