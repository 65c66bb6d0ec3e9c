"""Uniform grid on (0, 1), the central-difference Laplacian and its eigenpairs.

The Laplacian is ``N**2 * tridiag(-1, 2, -1)`` acting on the N-1 interior
nodes with homogeneous Dirichlet ghosts.  It is stored as a stencil, never as a
dense matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import InvalidDimensionError, InvalidInputError

__all__ = [
    "Grid",
    "TridiagonalOperator",
    "ShiftedSystem",
    "EigenPair",
    "build_laplacian",
    "eigenpairs",
    "eigenvalues",
    "eigenvector_matrix",
    "tridiag_solve",
]


def _check_n(N: int) -> int:
    if int(N) != N or N < 2:
        raise InvalidDimensionError(f"N must be an integer >= 2, got {N!r}")
    return int(N)


@dataclass(frozen=True)
class Grid:
    N: int

    def __post_init__(self):
        object.__setattr__(self, "N", _check_n(self.N))

    @property
    def h(self) -> float:
        return 1.0 / self.N

    @property
    def nodes(self) -> np.ndarray:
        """All nodes x_0 = 0, ..., x_N = 1."""
        return np.arange(self.N + 1) / self.N

    @property
    def interior(self) -> np.ndarray:
        return np.arange(1, self.N) / self.N


@dataclass(frozen=True)
class TridiagonalOperator:
    """``N**2 * tridiag(-1, 2, -1)`` on the interior nodes."""

    N: int

    def __post_init__(self):
        object.__setattr__(self, "N", _check_n(self.N))

    @property
    def size(self) -> int:
        return self.N - 1

    @property
    def scale(self) -> float:
        return float(self.N) ** 2

    @property
    def diag(self) -> np.ndarray:
        return np.full(self.size, 2.0 * self.scale)

    @property
    def off(self) -> float:
        return -self.scale

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape[0] != self.size:
            raise InvalidInputError(f"vector length {v.shape[0]} != {self.size}")
        out = 2.0 * v
        out[1:] -= v[:-1]
        out[:-1] -= v[1:]
        return self.scale * out

    __matmul__ = apply

    def to_dense(self) -> np.ndarray:
        """Dense copy, for tests and debugging only."""
        m = self.size
        return self.scale * (2.0 * np.eye(m) - np.eye(m, k=1) - np.eye(m, k=-1))

    def shifted(self, c: float, s: float) -> "ShiftedSystem":
        return ShiftedSystem(self, c, s)


@dataclass(frozen=True)
class ShiftedSystem:
    """The SPD system ``c*I + s*A``.  Factorised lazily, once."""

    op: TridiagonalOperator
    c: float
    s: float

    def __post_init__(self):
        if self.c < 0 or not self.s > 0:
            raise InvalidInputError(f"need c >= 0 and s > 0, got c={self.c}, s={self.s}")

    @property
    def diag_value(self) -> float:
        return self.c + 2.0 * self.s * self.op.scale

    @property
    def off_value(self) -> float:
        return -self.s * self.op.scale

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return self.c * v + self.s * self.op.apply(v)

    @cached_property
    def _factors(self):
        return _kernels.toeplitz_factor(self.diag_value, self.off_value, self.op.size)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        rhs = np.ascontiguousarray(rhs, dtype=float)
        if rhs.ndim != 1 or rhs.shape[0] != self.op.size:
            raise InvalidInputError(
                f"rhs must be a vector of length {self.op.size}, got shape {rhs.shape}"
            )
        cp, piv = self._factors
        return _kernels.toeplitz_solve(cp, piv, self.off_value, rhs, np.empty_like(rhs))


@dataclass(frozen=True)
class EigenPair:
    index: int
    value: float
    vector: np.ndarray
    cfactor: float


def build_laplacian(N: int) -> TridiagonalOperator:
    return TridiagonalOperator(N)


def eigenvalues(N: int) -> np.ndarray:
    """``4 N^2 sin^2(j pi / 2N)`` for j = 1..N-1."""
    N = _check_n(N)
    j = np.arange(1, N)
    return 4.0 * N * N * np.sin(j * np.pi / (2 * N)) ** 2


def eigenvector_matrix(N: int) -> np.ndarray:
    """Orthogonal symmetric matrix whose column j-1 is the j-th eigenvector."""
    N = _check_n(N)
    k = np.arange(1, N)
    # reduce j*k modulo 2N in integers so sin() only sees arguments in [0, 2 pi)
    phase = np.outer(k, k) % (2 * N)
    return np.sqrt(2.0 / N) * np.sin(phase * np.pi / N)


def eigenpairs(N: int) -> list[EigenPair]:
    N = _check_n(N)
    lam = eigenvalues(N)
    vecs = eigenvector_matrix(N)
    pairs = []
    for j in range(1, N):
        arg = j * np.pi / (2 * N)
        pairs.append(
            EigenPair(
                index=j,
                value=float(lam[j - 1]),
                vector=vecs[:, j - 1].copy(),
                cfactor=float((np.sin(arg) / arg) ** 2),
            )
        )
    return pairs


def tridiag_solve(system: ShiftedSystem, rhs: np.ndarray) -> np.ndarray:
    """Solve ``(c I + s A) x = rhs`` by Thomas elimination."""
    return system.solve(rhs)
