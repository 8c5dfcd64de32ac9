"""generate: synthetic dataset, oracle traces, split and metadata"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List

import pandas as pd

from commands.layout import RunLayout
from config.loader import config_fingerprint
from config.schema import ExperimentConfig
from config.settings import SEPARATOR_LENGTH, SPLIT_NAMES
from datagen import generate, lifetime_shares, sales_share, split, split_creatives
from features.assemble import FeatureMask, impression_percentile
from features.categorical import build_genre_vocabulary
from features.metadata import DatasetMetadata, write_metadata
from features.records import write_creatives, write_daily_csv
from evaluation.report import write_frame
from storage.files import atomic_write_text
from storage.manifest import record_run
from utils.logging import get_logger

logger = get_logger(__name__)


@dataclass
class GenerateOutcome:
    files: List[Path]
    split_sizes: Dict[str, int]
    lifetime_shares: Dict[str, float]
    sales_shares: Dict[str, float]
    summary: str = ""
    metadata: DatasetMetadata = field(default=None, repr=False)


def _shares_frame(lifetime: Dict[str, float], sales: Dict[str, float]) -> pd.DataFrame:
    return pd.DataFrame(
        {"bucket": list(lifetime), "lifetime_share": list(lifetime.values()), "sales_share": [sales[b] for b in lifetime]}
    )


def _summary(outcome: GenerateOutcome, fingerprint: str, seed: int) -> str:
    lines = ["=" * SEPARATOR_LENGTH, f"Generated dataset (seed {seed}, config {fingerprint})", "=" * SEPARATOR_LENGTH]
    for name in SPLIT_NAMES:
        lines.append(f"{name:<12} {outcome.split_sizes[name]:>8} creatives")
    lines.append("")
    lines.append(f"{'lifetime':<12} {'creatives':>10} {'sales':>10}")
    for bucket, share in outcome.lifetime_shares.items():
        lines.append(f"{bucket:<12} {share * 100:>9.2f}% {outcome.sales_shares[bucket] * 100:>9.2f}%")
    lines.append("=" * SEPARATOR_LENGTH)
    return "\n".join(lines) + "\n"


def cmd_generate(config: ExperimentConfig) -> GenerateOutcome:
    """Generate, split and write the dataset; reruns with the same config give identical files"""
    layout = RunLayout.from_config(config)
    fingerprint = config_fingerprint(config)
    generator = config.generator

    dataset = generate(generator)
    assignment = split(dataset.creatives, seed=generator.seed)
    parts = split_creatives(dataset.creatives, assignment)

    train = parts["train"]
    vocab = build_genre_vocabulary(creative.genre for creative in train)
    campaigns = {name: sorted(c for c, s in assignment.items() if s == name) for name in SPLIT_NAMES}
    metadata = DatasetMetadata(
        text_dim=generator.text_dim,
        image_dim=generator.image_dim,
        block_widths=FeatureMask().block_widths(generator.text_dim, generator.image_dim).as_dict(),
        genre_vocabulary=vocab,
        p95_impressions=impression_percentile(train),
        splits=campaigns,
        split_sizes={name: len(parts[name]) for name in SPLIT_NAMES},
        config_fingerprint=fingerprint,
        seed=generator.seed,
    )

    files = [write_creatives(layout.split_file(name), parts[name]) for name in SPLIT_NAMES]
    files.append(write_daily_csv(layout.dataset_dir / "daily.csv", dataset.creatives))
    oracle_lines = [trace.model_dump_json() for trace in dataset.oracle]
    files.append(atomic_write_text(layout.dataset_dir / "oracle.jsonl", "\n".join(oracle_lines) + "\n" if oracle_lines else ""))
    files.append(atomic_write_text(
        layout.dataset_dir / "splits.json", json.dumps(dict(sorted(assignment.items())), indent=2) + "\n"
    ))
    files.append(write_metadata(layout.metadata_file, metadata))

    outcome = GenerateOutcome(
        files=files,
        split_sizes=metadata.split_sizes,
        lifetime_shares=lifetime_shares(dataset.creatives) if dataset.creatives else {},
        sales_shares=sales_share(dataset.creatives) if dataset.creatives else {},
        metadata=metadata,
    )
    if dataset.creatives:
        files.append(write_frame(layout.dataset_dir / "shares.csv", _shares_frame(outcome.lifetime_shares, outcome.sales_shares)))
        outcome.summary = _summary(outcome, fingerprint, generator.seed)
        files.append(atomic_write_text(layout.dataset_dir / "summary.txt", outcome.summary))

    record_run(str(layout.out_dir), "generate", fingerprint, generator.seed, files)
    logger.info(f"Dataset written to {layout.dataset_dir}: {metadata.split_sizes}")
    return outcome
