"""One time level of cell values, interior plus ghost slots."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class FieldState:
    """Values on cells ``1-r .. J+p`` at one time level.

    Interior cells are ``1..J``; the ``r`` slots to the left and ``p`` slots
    to the right are ghost cells owned by the boundary closures.  Cell index
    ``j`` lives at array position ``j + r - 1``.
    """

    J: int
    r: int
    p: int
    time_index: int = 0
    values: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.J < 1:
            raise ValueError("need at least one interior cell")
        if self.r < 0 or self.p < 0:
            raise ValueError("ghost widths must be nonnegative")
        n = self.J + self.r + self.p
        if self.values is None:
            self.values = np.zeros(n)
        else:
            self.values = np.asarray(self.values, dtype=float)
            if self.values.shape != (n,):
                raise ValueError(f"values must have shape ({n},)")

    @property
    def interior(self) -> np.ndarray:
        """View of cells 1..J."""
        return self.values[self.r:self.r + self.J]

    @property
    def left_ghosts(self) -> np.ndarray:
        """View of cells 1-r..0."""
        return self.values[:self.r]

    @property
    def right_ghosts(self) -> np.ndarray:
        """View of cells J+1..J+p."""
        return self.values[self.r + self.J:]

    def get(self, j: int) -> float:
        """Value at cell index ``j`` (ghosts included)."""
        return float(self.values[self._pos(j)])

    def set(self, j: int, v: float) -> None:
        self.values[self._pos(j)] = v

    def _pos(self, j: int) -> int:
        pos = j + self.r - 1
        if not 0 <= pos < len(self.values):
            raise IndexError(f"cell index {j} outside 1-r..J+p")
        return pos

    def copy(self) -> "FieldState":
        return FieldState(J=self.J, r=self.r, p=self.p,
                          time_index=self.time_index,
                          values=self.values.copy())
