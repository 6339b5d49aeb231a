"""Dense vectors and linear maps on finite-dimensional real inner-product spaces.

Vectors are plain 1-d float64 numpy arrays; :func:`as_vector` is the validating
boundary (finiteness, dimension).  :class:`LinearMap` wraps a dense matrix and
exposes the Hilbert adjoint, ``<A x, y> = <x, A* y>``.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "DimensionMismatchError",
    "LinearMap",
    "as_vector",
    "inner",
    "norm",
]


class DimensionMismatchError(ValueError):
    """Operand dimensions are incompatible."""


def as_vector(values, dim: int | None = None) -> np.ndarray:
    """Validate and return a read-only 1-d float64 vector.

    Rejects non-finite entries and, when ``dim`` is given, wrong lengths.
    """
    v = np.array(values, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got shape {v.shape}")
    if v.size == 0:
        raise ValueError("vectors must have positive dimension")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite components")
    if dim is not None and v.size != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {v.size}")
    v.flags.writeable = False
    return v


def _check_same_dim(x: np.ndarray, y: np.ndarray) -> None:
    if x.shape != y.shape:
        raise DimensionMismatchError(
            f"dimension mismatch: {x.shape[0]} vs {y.shape[0]}"
        )


def inner(x, y) -> float:
    """Euclidean inner product <x, y>."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_same_dim(x, y)
    return float(np.dot(x, y))


def norm(x) -> float:
    """Euclidean norm ||x||."""
    return float(np.linalg.norm(np.asarray(x, dtype=float)))


class LinearMap:
    """Dense linear map A : R^cols -> R^rows with its Hilbert adjoint.

    The adjoint is the transpose; ``<A x, y> = <x, A* y>`` holds to machine
    precision by construction.  Entries are validated finite and frozen.
    """

    __slots__ = ("entries",)

    def __init__(self, entries):
        m = np.array(entries, dtype=float)
        if m.ndim != 2 or m.size == 0:
            raise ValueError(f"expected a non-empty 2-d matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix has non-finite entries")
        m.flags.writeable = False
        self.entries = m

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls(np.eye(n))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def apply(self, x) -> np.ndarray:
        """A x."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.cols,):
            raise DimensionMismatchError(
                f"map has {self.cols} columns, vector has shape {x.shape}"
            )
        return self.entries @ x

    def adjoint_apply(self, y) -> np.ndarray:
        """A* y."""
        y = np.asarray(y, dtype=float)
        if y.shape != (self.rows,):
            raise DimensionMismatchError(
                f"map has {self.rows} rows, vector has shape {y.shape}"
            )
        return self.entries.T @ y

    def __repr__(self):
        return f"LinearMap({self.rows}x{self.cols})"
