"""Lazily evaluated (x, t) fields and rectangular sampling grids."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    nx: int
    t_min: float
    t_max: float
    nt: int

    def __post_init__(self):
        if self.nx < 1 or self.nt < 1:
            raise ValueError("grid needs at least one point per axis")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def t(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.nt)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1) if self.nx > 1 else 0.0

    @property
    def dt(self) -> float:
        return (self.t_max - self.t_min) / (self.nt - 1) if self.nt > 1 else 0.0

    def mesh(self):
        """(X, T) arrays of shape (nt, nx)."""
        return np.meshgrid(self.x, self.t)

    @property
    def scale(self) -> float:
        return max(abs(self.x_max - self.x_min), abs(self.t_max - self.t_min), 1.0)

    def to_dict(self) -> dict:
        return {
            "x_min": self.x_min, "x_max": self.x_max, "nx": self.nx,
            "t_min": self.t_min, "t_max": self.t_max, "nt": self.nt,
        }

    @classmethod
    def from_dict(cls, d) -> "Grid":
        return cls(float(d["x_min"]), float(d["x_max"]), int(d["nx"]),
                   float(d["t_min"]), float(d["t_max"]), int(d["nt"]))

    @classmethod
    def square(cls, half_width: float, n: int) -> "Grid":
        return cls(-half_width, half_width, n, -half_width, half_width, n)


class MatrixField:
    """A complex field of fixed value shape, evaluated on demand.

    ``evaluator`` receives flat float arrays ``x`` and ``t`` of equal length K
    and returns an array of shape ``(K, *shape)``.  Calling the field
    broadcasts ``x`` and ``t`` and restores their shape in front of the value
    shape, so scalar inputs give a single matrix.
    """

    def __init__(self, evaluator, shape=(), name: str = ""):
        self._evaluator = evaluator
        self.shape = tuple(shape)
        self.name = name
        self._samples = {}

    def __call__(self, x, t):
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        lead = x.shape
        out = self._evaluator(x.ravel(), t.ravel())
        return np.asarray(out).reshape(lead + self.shape)

    def sample(self, grid: Grid) -> np.ndarray:
        """Values on ``grid`` with shape (nt, nx, *shape); cached per grid."""
        cached = self._samples.get(grid)
        if cached is None:
            X, T = grid.mesh()
            cached = self(X, T)
            cached.setflags(write=False)
            self._samples[grid] = cached
        return cached

    def map(self, fn, shape=None, name: str = "") -> "MatrixField":
        """Field whose values are ``fn`` applied to this field's batched values."""
        ev = self._evaluator
        return MatrixField(lambda x, t: fn(ev(x, t)), self.shape if shape is None else shape, name)

    def __repr__(self):
        return f"MatrixField({self.name or '?'}, shape={self.shape})"


def zero_field(n: int) -> MatrixField:
    return MatrixField(lambda x, t: np.zeros((x.size, n, n), dtype=complex), (n, n), "zero")


def constant_field(M) -> MatrixField:
    M = np.asarray(M, dtype=complex)
    return MatrixField(lambda x, t: np.broadcast_to(M, (x.size,) + M.shape).copy(), M.shape, "constant")
