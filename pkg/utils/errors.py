"""Exception types shared across the toolkit"""

from typing import Optional


class DomainError(ValueError):
    """An argument lies outside the domain of the operation"""


class ContractViolation(ValueError):
    """Shapes, grids or identifier sets of the inputs do not agree"""


class ConfigError(ValueError):
    """The experiment config is invalid or infeasible"""


class UndefinedMetricError(ArithmeticError):
    """The metric has no admissible support on the given inputs"""


class TrainingError(RuntimeError):
    """Training produced a non-finite loss or gradient"""

    def __init__(self, message: str, last_finite_epoch: Optional[int] = None):
        super().__init__(message)
        self.last_finite_epoch = last_finite_epoch


class StageError(RuntimeError):
    """A stage of the repro pipeline failed"""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
