"""Fully discrete averaged-L1 / averaged-SBD schemes on the central-difference grid.

At every step n = 1..L the marcher solves

    (w_0/tau + 3A/4) u^n = (f^{n-1} + f^n)/2 - A u^{n-2}/4 + (w_0/tau) u^0 - H^n/tau

with the history term

    H^n = sum_{k=1}^{n-1} w_k (u^{n-k} - u^0) - sum_{k=0}^{n-2} w_k (u^{n-1-k} - u^0)

and ``u^{-1} = u^0``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .errors import DivergenceError, DomainError, InvalidInputError
from .mesh import ShiftedSystem, TridiagonalOperator, build_laplacian
from .projection import FunctionDescriptor, project_PN_on_grid, sample_on_grid
from .weights import Scheme, weights

__all__ = [
    "Spatial",
    "SeparableSource",
    "ProblemSpec",
    "SolverConfig",
    "SolutionField",
    "Trajectory",
    "discretize_data",
    "step_matrix",
    "advance",
    "scalar_reduce",
]


class Spatial(str, enum.Enum):
    CENTRAL = "central"
    MODIFIED = "modified"

    @classmethod
    def parse(cls, value) -> "Spatial":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise InvalidInputError(f"unknown spatial scheme {value!r}") from None


@dataclass(frozen=True)
class SeparableSource:
    """``f(x, t) = g(t) * psi(x)`` with ``g(t) = (t + shift)**exponent`` by default."""

    spatial: FunctionDescriptor
    exponent: float = 0.0
    shift: float = 1.0
    time_func: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)

    def time_factor(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.time_func is not None:
            return np.asarray(self.time_func(t), dtype=float) * np.ones_like(t)
        return (t + self.shift) ** self.exponent


@dataclass(frozen=True)
class ProblemSpec:
    alpha: float
    T: float = 1.0
    u0: FunctionDescriptor = field(default_factory=FunctionDescriptor.zero)
    source: SeparableSource | None = None

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.T > 0.0:
            raise DomainError(f"T must be positive, got {self.T}")


@dataclass(frozen=True)
class SolverConfig:
    temporal: Scheme
    spatial: Spatial
    N: int
    L: int
    T: float = 1.0
    alpha: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "temporal", Scheme.parse(self.temporal))
        object.__setattr__(self, "spatial", Spatial.parse(self.spatial))
        if int(self.N) != self.N or self.N < 2:
            raise InvalidInputError(f"N must be an integer >= 2, got {self.N!r}")
        if int(self.L) != self.L or self.L < 1:
            raise InvalidInputError(f"L must be a positive integer, got {self.L!r}")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")

    @property
    def tau(self) -> float:
        return self.T / self.L

    @property
    def h(self) -> float:
        return 1.0 / self.N

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.L + 1) * self.tau


@dataclass(frozen=True)
class SolutionField:
    values: np.ndarray
    time: float


@dataclass(frozen=True)
class Trajectory:
    """All time levels; ``values[n]`` is u^n on the interior nodes."""

    values: np.ndarray
    config: SolverConfig

    @property
    def fields(self) -> list[SolutionField]:
        t = self.config.times
        return [SolutionField(self.values[n], float(t[n])) for n in range(self.values.shape[0])]

    @property
    def final(self) -> SolutionField:
        return SolutionField(self.values[-1], float(self.config.T))

    def __len__(self) -> int:
        return self.values.shape[0]


def _discretize(v: FunctionDescriptor, cfg: SolverConfig) -> np.ndarray:
    if cfg.spatial is Spatial.MODIFIED:
        return project_PN_on_grid(v, cfg.N)
    return sample_on_grid(v, cfg.N)


def discretize_data(problem: ProblemSpec, config: SolverConfig):
    """Initial vector and a callable ``t -> f(t)`` on the grid.

    Central flavour samples the data at the nodes; modified flavour samples the
    P_N projection.  The spatial factor of the source is discretised once.
    """
    u0 = _discretize(problem.u0, config)
    src = problem.source
    if src is None:
        zero = np.zeros(config.N - 1)

        def source_eval(t):
            return zero.copy()

    else:
        psi = _discretize(src.spatial, config)

        def source_eval(t):
            return float(src.time_factor(np.asarray(t))) * psi

    return SolutionField(u0, 0.0), source_eval


def _source_matrix(problem: ProblemSpec, config: SolverConfig) -> np.ndarray:
    m = config.N - 1
    if problem.source is None:
        return np.zeros((config.L + 1, m))
    psi = _discretize(problem.source.spatial, config)
    g = problem.source.time_factor(config.times)
    return np.outer(g, psi)


def step_matrix(config: SolverConfig, A: TridiagonalOperator, w0: float) -> ShiftedSystem:
    """The per-step system ``(w0/tau) I + (3/4) A``."""
    if not w0 > 0:
        raise InvalidInputError(f"leading weight must be positive, got {w0}")
    return A.shifted(w0 / config.tau, 0.75)


def advance(problem: ProblemSpec, config: SolverConfig) -> Trajectory:
    """March from t_0 = 0 to t_L = T."""
    if abs(problem.alpha - config.alpha) > 0 or abs(problem.T - config.T) > 0:
        raise InvalidInputError("problem and config disagree on alpha or T")
    u0, _ = discretize_data(problem, config)
    src = _source_matrix(problem, config)
    return march(u0.values, src, config)


def march(u0: np.ndarray, src: np.ndarray, config: SolverConfig) -> Trajectory:
    """Run the scheme for already discretised data (``src`` has L+1 rows)."""
    u0 = np.ascontiguousarray(u0, dtype=float)
    src = np.ascontiguousarray(src, dtype=float)
    m = config.N - 1
    if u0.shape != (m,) or src.shape != (config.L + 1, m):
        raise InvalidInputError(
            f"expected u0 of shape ({m},) and source of shape ({config.L + 1}, {m})"
        )
    w = weights(config.temporal, config.alpha, config.tau, config.L).values
    U, bad = _kernels.march(np.ascontiguousarray(w), config.tau, float(config.N) ** 2, u0, src, config.L)
    if bad:
        raise DivergenceError(bad)
    return Trajectory(U, config)


def scalar_reduce(
    alpha: float,
    tau: float,
    lam: float,
    L: int,
    scheme,
    u0_coeff: float,
    f_coeffs: Sequence[float] | None = None,
) -> np.ndarray:
    """The same recurrence with A replaced by a positive scalar ``lam``.

    Plain Python loops, deliberately independent of the vector marcher, for use
    as an eigen-diagonalised check.
    """
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    w = [float(x) for x in weights(scheme, alpha, tau, L).values]
    f = [0.0] * (L + 1) if f_coeffs is None else [float(x) for x in f_coeffs]
    if len(f) != L + 1:
        raise InvalidInputError(f"need {L + 1} source values, got {len(f)}")
    u = [float(u0_coeff)]
    for n in range(1, L + 1):
        prev2 = u[n - 2] if n >= 2 else u[0]
        hist = 0.0
        for k in range(1, n):
            hist += w[k] * (u[n - k] - u[0])
        for k in range(0, n - 1):
            hist -= w[k] * (u[n - 1 - k] - u[0])
        rhs = 0.5 * (f[n - 1] + f[n]) - 0.25 * lam * prev2 + w[0] / tau * u[0] - hist / tau
        u.append(rhs / (w[0] / tau + 0.75 * lam))
    return np.array(u)
