"""Utility functions and configurations"""

from utils.logging import setup_logging, get_logger
from utils.errors import (
    DomainError,
    ContractViolation,
    ConfigError,
    UndefinedMetricError,
    TrainingError,
    StageError,
)

__all__ = [
    "setup_logging",
    "get_logger",
    "DomainError",
    "ContractViolation",
    "ConfigError",
    "UndefinedMetricError",
    "TrainingError",
    "StageError",
]
