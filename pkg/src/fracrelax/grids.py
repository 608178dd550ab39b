"""Uniform time meshes and sampled functions on them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["DomainError", "GridMismatchError", "UniformGrid", "GridFunction"]


class DomainError(ValueError):
    """Argument outside an operator's domain (e.g. t <= a)."""


class GridMismatchError(ValueError):
    """Grids of the operands are incompatible."""


@dataclass(frozen=True)
class UniformGrid:
    """Nodes t_j = a + j*h, j = 0..n."""

    a: float
    h: float
    n: int

    def __post_init__(self):
        if not math.isfinite(self.a):
            raise DomainError(f"grid start must be finite, got {self.a!r}")
        if not (math.isfinite(self.h) and self.h > 0.0):
            raise DomainError(f"grid step must be positive, got {self.h!r}")
        if self.n < 1:
            raise DomainError(f"grid needs at least one step, got n={self.n}")

    @property
    def span(self) -> float:
        """Window length T = n*h."""
        return self.n * self.h

    def times(self) -> np.ndarray:
        return self.a + self.h * np.arange(self.n + 1)

    def refined(self, factor: int = 2) -> "UniformGrid":
        """Same window with the step divided by ``factor``."""
        if factor < 1:
            raise ValueError("refinement factor must be >= 1")
        return UniformGrid(self.a, self.h / factor, self.n * factor)

    @classmethod
    def from_span(cls, a: float, span: float, n: int) -> "UniformGrid":
        """Grid over [a, a+span] with n steps."""
        if not span > 0.0:
            raise DomainError(f"span must be positive, got {span!r}")
        return cls(a, span / n, n)


@dataclass
class GridFunction:
    """Real samples on a uniform grid; values[j] = f(t_j).

    ``singular_start=True`` marks node 0 as undefined (stored as NaN); this
    is how operators with an endpoint singularity flag t = a instead of
    fabricating a value there.
    """

    grid: UniformGrid
    values: np.ndarray = field(repr=False)
    singular_start: bool = False

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.n + 1,):
            raise GridMismatchError(
                f"expected {self.grid.n + 1} values, got shape {vals.shape}"
            )
        if self.singular_start:
            if not np.isnan(vals[0]):
                raise DomainError("singular start node must be stored as NaN")
            if not np.all(np.isfinite(vals[1:])):
                raise DomainError("values at t > a must be finite")
        elif not np.all(np.isfinite(vals)):
            raise DomainError("values must all be finite")
        self.values = vals

    def defined_values(self) -> np.ndarray:
        """Values on the defined nodes (drops node 0 when flagged singular)."""
        return self.values[1:] if self.singular_start else self.values
