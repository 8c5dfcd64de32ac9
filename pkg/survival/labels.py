"""Event labels per time grid"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from survival.grid import BEYOND_GRID, TimeGrid, interval_index
from utils.errors import ContractViolation, DomainError


@dataclass(frozen=True)
class EventLabels:
    grid: TimeGrid
    delta: tuple
    observed_count: int

    def __post_init__(self):
        delta = tuple(int(d) for d in self.delta)
        object.__setattr__(self, "delta", delta)
        if not 1 <= self.observed_count <= self.grid.L:
            raise ContractViolation(f"observed count {self.observed_count} outside 1..{self.grid.L}")
        if len(delta) != self.observed_count:
            raise ContractViolation("delta length must equal the observed interval count")
        if any(d not in (0, 1) for d in delta):
            raise ContractViolation("delta entries must be 0 or 1")
        if sum(delta) > 1 or (sum(delta) == 1 and delta[-1] != 1):
            raise ContractViolation("an event can only mark the last observed interval")

    @property
    def censored(self) -> bool:
        return sum(self.delta) == 0

    @property
    def event_interval(self):
        """1-based interval of the event, None when censored"""
        return None if self.censored else self.observed_count


def labels_from_lifetime(grid: TimeGrid, lifetime_days: float, censored: bool) -> EventLabels:
    if not lifetime_days > 0:
        raise DomainError(f"lifetime must be positive, got {lifetime_days}")
    index = interval_index(grid, lifetime_days)
    if index == BEYOND_GRID:
        return EventLabels(grid, (0,) * grid.L, grid.L)
    delta = [0] * index
    if not censored:
        delta[-1] = 1
    return EventLabels(grid, tuple(delta), index)


def label_arrays(grid: TimeGrid, lifetimes: Sequence[float], censored: Sequence[bool]) -> Tuple[np.ndarray, np.ndarray]:
    """Batch labels as (delta, observed) matrices of shape (n, L)

    observed[i, l] is 1 for the first l' intervals of record i.
    """
    lifetimes = np.asarray(lifetimes, dtype=float)
    censored = np.asarray(censored, dtype=bool)
    if np.any(lifetimes <= 0):
        raise DomainError("lifetimes must be positive")
    n, L = lifetimes.shape[0], grid.L
    index = np.searchsorted(np.asarray(grid.bounds[1:]), lifetimes, side="left") + 1
    beyond = lifetimes > grid.upper
    count = np.where(beyond, L, index)
    columns = np.arange(1, L + 1)[None, :]
    observed = (columns <= count[:, None]).astype(float)
    delta = np.zeros((n, L))
    has_event = ~beyond & ~censored
    rows = np.nonzero(has_event)[0]
    delta[rows, count[rows] - 1] = 1.0
    return delta, observed


def grid_truths(grid: TimeGrid, lifetimes: Sequence[float], censored: Sequence[bool]) -> Tuple[np.ndarray, np.ndarray]:
    """(time, event) pairs as seen through a grid: times capped at t_L, late events censored"""
    lifetimes = np.asarray(lifetimes, dtype=float)
    censored = np.asarray(censored, dtype=bool)
    times = np.minimum(lifetimes, grid.upper)
    events = ~censored & (lifetimes <= grid.upper)
    return times, events
