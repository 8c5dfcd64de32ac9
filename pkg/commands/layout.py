"""Where a run's artifacts live inside the output directory"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List

from config.schema import ExperimentConfig
from config.settings import SPLIT_NAMES
from features.metadata import DatasetMetadata, read_metadata
from features.records import AdCreative, read_creatives
from utils.errors import DomainError
from utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class RunLayout:
    out_dir: Path
    dataset_dir: Path
    checkpoint: Path
    predictions: Path
    report_dir: Path

    @classmethod
    def from_config(cls, config: ExperimentConfig) -> "RunLayout":
        out = Path(config.paths.out_dir)
        checkpoint = out / config.paths.checkpoint
        if config.training.checkpoint_format == "npz":
            checkpoint = checkpoint.with_suffix(".npz")
        return cls(
            out_dir=out,
            dataset_dir=out / config.paths.dataset_dir,
            checkpoint=checkpoint,
            predictions=out / config.paths.predictions,
            report_dir=out / config.paths.report_dir,
        )

    def split_file(self, name: str) -> Path:
        return self.dataset_dir / f"{name}.jsonl"

    @property
    def metadata_file(self) -> Path:
        return self.dataset_dir / "metadata.json"

    @property
    def trace_file(self) -> Path:
        return self.checkpoint.with_name(f"{self.checkpoint.stem}_trace.csv")

    def report(self, name: str) -> Path:
        return self.report_dir / name


def _require(path: Path):
    if not path.exists():
        raise FileNotFoundError(f"{path} not found; run 'generate' first")


def load_metadata(layout: RunLayout) -> DatasetMetadata:
    _require(layout.metadata_file)
    return read_metadata(layout.metadata_file)


def load_split(layout: RunLayout, name: str) -> List[AdCreative]:
    if name not in SPLIT_NAMES:
        raise DomainError(f"unknown split '{name}' (known: {', '.join(SPLIT_NAMES)})")
    path = layout.split_file(name)
    _require(path)
    creatives = read_creatives(path)
    logger.info(f"Loaded {len(creatives)} creatives from {path}")
    return creatives


def load_splits(layout: RunLayout) -> Dict[str, List[AdCreative]]:
    return {name: load_split(layout, name) for name in SPLIT_NAMES}
