"""Dataset metadata shared by training, prediction and evaluation"""

import json
from pathlib import Path
from typing import Dict, List, Union

from pydantic import BaseModel, ConfigDict, Field

from storage.files import atomic_write_text
from utils.errors import ContractViolation


class DatasetMetadata(BaseModel):
    model_config = ConfigDict(extra="forbid")

    text_dim: int = Field(ge=0)
    image_dim: int = Field(ge=0)
    block_widths: Dict[str, int]
    genre_vocabulary: Dict[str, int]
    p95_impressions: float = Field(ge=0)
    splits: Dict[str, List[str]]           # split name -> campaign ids
    split_sizes: Dict[str, int]            # split name -> creative count
    config_fingerprint: str
    seed: int

    @property
    def genre_cardinality(self) -> int:
        return max(self.genre_vocabulary.values(), default=0) + 1

    def split_of(self, campaign_id: str) -> str:
        for name, campaigns in self.splits.items():
            if campaign_id in campaigns:
                return name
        raise ContractViolation(f"campaign '{campaign_id}' is not assigned to any split")


def write_metadata(path: Union[str, Path], metadata: DatasetMetadata) -> Path:
    return atomic_write_text(path, json.dumps(metadata.model_dump(), indent=2, sort_keys=True) + "\n")


def read_metadata(path: Union[str, Path]) -> DatasetMetadata:
    return DatasetMetadata.model_validate_json(Path(path).read_text(encoding="utf-8"))
