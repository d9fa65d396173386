from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from wavelab.core.errors import StateDomainError

EULER_VARIABLES = ("rho", "p", "u")
MIN_NODES = 16


@dataclass(frozen=True)
class Grid1D:
    """
    Node values on a uniform grid x0 = x_0 < ... < x_(nx-1) = x1.

    `positive` lists the columns that must stay strictly positive (rho and p
    for Euler states); the state array is copied and made read-only.
    """

    x0: float
    x1: float
    state: np.ndarray
    variables: Tuple[str, ...] = EULER_VARIABLES
    positive: Tuple[int, ...] = (0, 1)

    def __post_init__(self):
        state = np.array(self.state, dtype=float)
        if state.ndim != 2 or state.shape[1] != len(self.variables):
            raise ValueError(
                f"State must have shape (nx, {len(self.variables)}), got {state.shape}"
            )
        if state.shape[0] < MIN_NODES:
            raise ValueError(f"Grid needs at least {MIN_NODES} nodes, got {state.shape[0]}")
        if not self.x1 > self.x0:
            raise ValueError(f"Empty domain [{self.x0}, {self.x1}]")
        if self.positive and np.any(state[:, list(self.positive)] <= 0.0):
            raise StateDomainError(
                "Grid state leaves the positive cone",
                {"columns": [self.variables[i] for i in self.positive]},
            )
        state.setflags(write=False)
        object.__setattr__(self, "state", state)

    @property
    def nx(self) -> int:
        return self.state.shape[0]

    @property
    def dx(self) -> float:
        return (self.x1 - self.x0) / (self.nx - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x0, self.x1, self.nx)

    def with_state(self, state: np.ndarray) -> "Grid1D":
        return Grid1D(self.x0, self.x1, state, self.variables, self.positive)

    def column(self, name: str) -> np.ndarray:
        return self.state[:, self.variables.index(name)]


def refined_nodes(nx: int) -> int:
    """Node count with half the spacing on the same interval."""
    return 2 * (nx - 1) + 1


@dataclass
class TimeSeries:
    times: List[float] = field(default_factory=list)
    frames: List[Grid1D] = field(default_factory=list)
    cfl_history: List[float] = field(default_factory=list)
    system: Optional[str] = None
    convention: Optional[str] = None

    def record(self, t: float, frame: Grid1D) -> None:
        if self.times and t <= self.times[-1]:
            raise ValueError(f"Frame times must increase, got {t} after {self.times[-1]}")
        self.times.append(float(t))
        self.frames.append(frame)

    @property
    def final(self) -> Grid1D:
        return self.frames[-1]

    @property
    def initial(self) -> Grid1D:
        return self.frames[0]

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.frames[0].variables

    def stacked(self) -> np.ndarray:
        """(n_frames, nx, k) array of all frames."""
        return np.stack([f.state for f in self.frames])

    def rows(self):
        """(t, x, values...) rows over every frame, for CSV output."""
        for t, frame in zip(self.times, self.frames):
            for x, values in zip(frame.x, frame.state):
                yield (t, x, *values)
