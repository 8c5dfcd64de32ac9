"""State carried through the repro pipeline graph"""

from typing import Any, Dict, List, Optional, TypedDict

from config.schema import ExperimentConfig
from evaluation.report import EvalReport


class ReproState(TypedDict, total=False):
    """Each node returns a partial update; failed_stage stops the run"""
    preset: str
    config: ExperimentConfig
    fingerprint: str

    dataset_files: List[str]
    checkpoints: Dict[str, str]      # model name -> checkpoint path
    predictions: Dict[str, str]      # model name -> predictions JSONL
    reports: List[EvalReport]
    case_long_checkpoints: Any       # pandas frame (checkpoint_day, method, ndcg, n)
    report_files: List[str]

    checks: List[Any]
    acceptance_passed: Optional[bool]

    failed_stage: Optional[str]
    error: Optional[str]
