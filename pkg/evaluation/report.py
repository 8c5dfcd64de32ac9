"""Evaluation report rows and their CSV / text renderings"""

import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence, Union

import pandas as pd

from config.settings import SEPARATOR_LENGTH
from storage.files import atomic_write, atomic_write_text

REPORT_COLUMNS = ("metric", "grid", "slice", "value", "n", "flag", "model", "config_fingerprint")


@dataclass(frozen=True)
class EvalReport:
    metric: str
    value: float
    slice: str = "all"
    n: int = 0
    grid: str = ""
    flag: str = ""
    model: str = ""
    config_fingerprint: str = ""


def reports_frame(reports: Sequence[EvalReport]) -> pd.DataFrame:
    return pd.DataFrame([asdict(r) for r in reports], columns=list(REPORT_COLUMNS))


def write_frame(path: Union[str, Path], frame: pd.DataFrame) -> Path:
    """Atomic CSV write with fixed float formatting so reruns are byte-identical"""
    return atomic_write(path, lambda tmp: frame.to_csv(tmp, index=False, float_format="%.6f"))


def write_reports(path: Union[str, Path], reports: Sequence[EvalReport]) -> Path:
    return write_frame(path, reports_frame(reports))


def _format_value(value: float) -> str:
    return "n/a" if value is None or (isinstance(value, float) and math.isnan(value)) else f"{value:.4f}"


def summary_text(title: str, reports: Sequence[EvalReport]) -> str:
    lines = ["=" * SEPARATOR_LENGTH, title, "=" * SEPARATOR_LENGTH]
    for r in reports:
        where = " ".join(part for part in (r.model, r.grid, r.slice) if part)
        flag = f"  [{r.flag}]" if r.flag else ""
        lines.append(f"{r.metric:<12} {where:<48} {_format_value(r.value):>8}  n={r.n}{flag}")
    lines.append("=" * SEPARATOR_LENGTH)
    return "\n".join(lines) + "\n"


def write_summary(path: Union[str, Path], title: str, reports: Sequence[EvalReport]) -> Path:
    return atomic_write_text(path, summary_text(title, reports))
