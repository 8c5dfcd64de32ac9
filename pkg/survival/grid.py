"""Time grids: ordered right-closed day intervals"""

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from config.settings import GRID_PRESETS
from utils.errors import ContractViolation, DomainError

BEYOND_GRID = "beyond-grid"


@dataclass(frozen=True)
class TimeGrid:
    """Bounds t_0 < t_1 < ... < t_L; interval l (1-based) is (t_{l-1}, t_l]"""
    bounds: tuple
    name: Optional[str] = None

    def __post_init__(self):
        bounds = tuple(float(b) for b in self.bounds)
        if len(bounds) < 2:
            raise ContractViolation("a time grid needs at least two bounds (L >= 1)")
        if bounds[0] < 0:
            raise ContractViolation("grid bounds must be non-negative")
        if any(b >= a for a, b in zip(bounds[1:], bounds[:-1])):
            raise ContractViolation(f"grid bounds must be strictly increasing: {bounds}")
        object.__setattr__(self, "bounds", bounds)

    @property
    def L(self) -> int:
        return len(self.bounds) - 1

    @property
    def lower(self) -> float:
        return self.bounds[0]

    @property
    def upper(self) -> float:
        return self.bounds[-1]

    @property
    def widths(self) -> np.ndarray:
        return np.diff(np.asarray(self.bounds))

    def interval_bounds(self, index: int) -> tuple:
        """(lower, upper] of the 1-based interval"""
        if not 1 <= index <= self.L:
            raise DomainError(f"interval index {index} outside 1..{self.L}")
        return self.bounds[index - 1], self.bounds[index]

    def upper_day(self, index: int) -> float:
        return self.interval_bounds(index)[1]

    def same_as(self, other: "TimeGrid") -> bool:
        return self.bounds == other.bounds

    def to_json(self) -> str:
        return json.dumps(list(self.bounds))

    @classmethod
    def from_json(cls, text: str, name: Optional[str] = None) -> "TimeGrid":
        return cls(tuple(json.loads(text)), name=name)

    @classmethod
    def preset(cls, name: str) -> "TimeGrid":
        if name not in GRID_PRESETS:
            raise ContractViolation(f"unknown grid preset '{name}' (known: {sorted(GRID_PRESETS)})")
        return cls(GRID_PRESETS[name], name=name)


SHORT_GRID = TimeGrid.preset("short")
LONG_GRID = TimeGrid.preset("long")
MERGED_GRID = TimeGrid.preset("overall-merged")


def interval_index(grid: TimeGrid, day: float) -> Union[int, str]:
    """Index l with t_{l-1} < day <= t_l, or BEYOND_GRID past t_L

    Days at or below the first bound fall into interval 1.
    """
    if not day > 0:
        raise DomainError(f"day must be positive, got {day}")
    if day > grid.upper:
        return BEYOND_GRID
    # first bound >= day, counted among the upper bounds t_1..t_L
    position = int(np.searchsorted(np.asarray(grid.bounds[1:]), day, side="left"))
    return position + 1


def interval_indices(grid: TimeGrid, days: Iterable[float]) -> np.ndarray:
    """Vectorized interval_index; 0 marks beyond-grid"""
    days = np.asarray(days, dtype=float)
    if np.any(days <= 0):
        raise DomainError("days must be positive")
    index = np.searchsorted(np.asarray(grid.bounds[1:]), days, side="left") + 1
    index[days > grid.upper] = 0
    return index


def resolve_grid(grid: Union[TimeGrid, str, Sequence[float]]) -> TimeGrid:
    """Accept a TimeGrid, a preset name, or raw bounds"""
    if isinstance(grid, TimeGrid):
        return grid
    if isinstance(grid, str):
        return TimeGrid.preset(grid)
    return TimeGrid(tuple(grid))
