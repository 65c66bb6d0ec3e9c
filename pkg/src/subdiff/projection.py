"""Data functions on (0, 1), their sine coefficients and the projection P_N.

Coefficients are taken against the normalised Dirichlet eigenfunctions
``phi_k(x) = sqrt(2) sin(k pi x)``.  Closed forms are used where they exist;
everything else goes through composite 16-point Gauss-Legendre on panels that
are graded geometrically toward algebraic singularities and capped at a
quarter period of the highest requested mode.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.fft import dst

from .errors import DomainError, EvaluationError, InvalidInputError
from .mesh import Grid

__all__ = [
    "FunctionDescriptor",
    "SineCoefficients",
    "sine_coefficients",
    "sine_synthesis",
    "project_PN_on_grid",
    "sample_on_grid",
    "parse_descriptor",
]

GL_POINTS = 16
GRADING_RATIO = 0.5
# innermost graded panel is shrunk until width**exponent falls below this
_INNER_TOL = 1e-17
_MAX_DEPTH = 200

_GL_X, _GL_W = leggauss(GL_POINTS)

_ANALYTIC = {"characteristic", "linear", "sine_mode", "zero"}


@dataclass(frozen=True)
class FunctionDescriptor:
    """A data function on (0, 1), described by kind and parameters.

    Build instances with the classmethods, e.g. ``FunctionDescriptor.power_bump(0.3)``.
    """

    kind: str
    params: tuple[float, ...] = ()
    func: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    singular_points: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind == "singular_power":
            (g,) = self.params
            if not 0.0 < g < 0.5:
                raise DomainError(f"singular_power needs 0 < gamma < 0.5, got {g}")
        elif self.kind == "power_bump":
            (s,) = self.params
            if not s > 0.0:
                raise DomainError(f"power_bump needs sigma > 0, got {s}")
        elif self.kind == "sine_mode":
            (k,) = self.params
            if int(k) != k or k < 1:
                raise DomainError(f"sine_mode needs a positive integer mode, got {k}")
        elif self.kind == "characteristic":
            (a,) = self.params
            if not 0.0 <= a <= 1.0:
                raise DomainError(f"characteristic jump must lie in [0, 1], got {a}")
        elif self.kind == "custom":
            if self.func is None:
                raise InvalidInputError("custom descriptor needs a callable")
        elif self.kind not in {"linear", "zero"}:
            raise InvalidInputError(f"unknown function kind {self.kind!r}")

    # -- constructors -----------------------------------------------------

    @classmethod
    def characteristic(cls, a: float = 0.5) -> "FunctionDescriptor":
        """Indicator of ``x > a`` (strict, so the value at ``a`` is 0)."""
        return cls("characteristic", (float(a),))

    @classmethod
    def power_bump(cls, sigma: float) -> "FunctionDescriptor":
        """``(0.25**2 - (x - 0.5)**2)**sigma`` on ``|x - 0.5| < 0.25``, else 0."""
        return cls("power_bump", (float(sigma),))

    @classmethod
    def singular_power(cls, gamma: float) -> "FunctionDescriptor":
        """``(x - 0.5)**(-gamma)`` for ``x > 0.5``, else 0."""
        return cls("singular_power", (float(gamma),))

    @classmethod
    def linear(cls) -> "FunctionDescriptor":
        return cls("linear")

    @classmethod
    def sine_mode(cls, k: int) -> "FunctionDescriptor":
        """The eigenfunction ``sqrt(2) sin(k pi x)``."""
        return cls("sine_mode", (int(k),))

    @classmethod
    def zero(cls) -> "FunctionDescriptor":
        return cls("zero")

    @classmethod
    def custom(
        cls, func: Callable[[np.ndarray], np.ndarray], singular_points: Sequence[float] = ()
    ) -> "FunctionDescriptor":
        """Arbitrary vectorised callable; ``singular_points`` split the quadrature."""
        return cls("custom", (), func, tuple(float(p) for p in singular_points))

    # -- evaluation -------------------------------------------------------

    @property
    def is_analytic(self) -> bool:
        return self.kind in _ANALYTIC

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        k = self.kind
        if k == "characteristic":
            return (x > self.params[0]).astype(float)
        if k == "power_bump":
            s = x - 0.5
            inside = np.abs(s) < 0.25
            base = np.where(inside, 0.0625 - s * s, 0.0)
            return np.where(inside, np.abs(base) ** self.params[0], 0.0)
        if k == "singular_power":
            return self._local(0.5, x - 0.5)
        if k == "linear":
            return x.copy()
        if k == "sine_mode":
            return math.sqrt(2.0) * np.sin(self.params[0] * np.pi * x)
        if k == "zero":
            return np.zeros_like(x)
        return np.asarray(self.func(x), dtype=float) * np.ones_like(x)

    def _local(self, origin: float, offset: np.ndarray) -> np.ndarray:
        """Evaluate at ``origin + offset`` without rounding ``offset`` away."""
        if self.kind == "singular_power" and origin == 0.5:
            out = np.zeros_like(offset)
            pos = offset > 0
            out[pos] = offset[pos] ** (-self.params[0])
            return out
        if self.kind == "power_bump" and origin in (0.25, 0.75):
            # distance to the support edge is |offset|; base = u (0.5 - u)
            u = np.abs(offset)
            s = (origin + offset) - 0.5
            inside = np.abs(s) < 0.25
            return np.where(inside, (u * (0.5 - u)) ** self.params[0], 0.0)
        return self(origin + offset)

    # -- quadrature layout ------------------------------------------------

    def _segments(self) -> list[tuple[float, float, float | None, float | None]]:
        """``(a, b, left_exp, right_exp)``; an exponent means grade toward that end."""
        k = self.kind
        if k == "singular_power":
            return [(0.5, 1.0, 1.0 - self.params[0], None)]
        if k == "power_bump":
            sig = self.params[0]
            e = None if float(sig).is_integer() else 1.0 + sig
            return [(0.25, 0.75, e, e)]
        if k == "characteristic":
            a = self.params[0]
            return [(a, 1.0, None, None)] if a < 1.0 else []
        if k == "custom" and self.singular_points:
            pts = sorted({0.0, 1.0, *[p for p in self.singular_points if 0.0 < p < 1.0]})
            return [(a, b, 0.5, 0.5) for a, b in zip(pts[:-1], pts[1:])]
        return [(0.0, 1.0, None, None)]

    def __str__(self) -> str:
        if self.kind in {"linear", "zero"}:
            return self.kind
        if self.kind == "custom":
            return "custom"
        return f"{self.kind}({', '.join(_fmt(p) for p in self.params)})"


def _fmt(p: float) -> str:
    return str(int(p)) if float(p).is_integer() else repr(float(p))


_DESC_RE = re.compile(r"^\s*([a-z_\-]+)\s*(?:\(\s*([^)]*)\s*\))?\s*$")


def parse_descriptor(text: str) -> FunctionDescriptor:
    """Parse ``"power_bump(0.3)"``, ``"characteristic(0.5)"``, ``"linear"`` ..."""
    m = _DESC_RE.match(text)
    if not m:
        raise InvalidInputError(f"cannot parse function descriptor {text!r}")
    kind = m.group(1).replace("-", "_")
    try:
        args = [float(a) for a in m.group(2).split(",")] if m.group(2) else []
    except ValueError:
        raise InvalidInputError(f"non-numeric argument in {text!r}") from None
    ctor = {
        "characteristic": FunctionDescriptor.characteristic,
        "power_bump": FunctionDescriptor.power_bump,
        "singular_power": FunctionDescriptor.singular_power,
        "linear": FunctionDescriptor.linear,
        "sine_mode": FunctionDescriptor.sine_mode,
        "zero": FunctionDescriptor.zero,
    }.get(kind)
    if ctor is None:
        raise InvalidInputError(f"unknown function kind {kind!r}")
    try:
        return ctor(*args)
    except TypeError as exc:
        raise InvalidInputError(f"bad arguments in {text!r}") from exc


# ---------------------------------------------------------------------------
# coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SineCoefficients:
    """``values[k-1] = (v, phi_k)`` for k = 1..K."""

    values: np.ndarray

    @property
    def K(self) -> int:
        return self.values.shape[0]

    def parseval_partial(self) -> np.ndarray:
        return np.cumsum(self.values**2)


def _graded_panels(length: float, exponent: float | None) -> list[tuple[float, float]]:
    """Panels on [0, length] (offsets from the graded end)."""
    if exponent is None:
        return [(0.0, length)]
    inner = _INNER_TOL ** (1.0 / exponent)
    depth = 0
    while length * GRADING_RATIO**depth > inner and depth < _MAX_DEPTH:
        depth += 1
    edges = [length * GRADING_RATIO**j for j in range(depth + 1)] + [0.0]
    return [(edges[j + 1], edges[j]) for j in range(len(edges) - 1)]


def _split(lo: float, hi: float, cap: float) -> list[tuple[float, float]]:
    n = max(1, math.ceil((hi - lo) / cap - 1e-12))
    e = np.linspace(lo, hi, n + 1)
    return list(zip(e[:-1], e[1:]))


def quadrature_nodes(v: FunctionDescriptor, kmax: int) -> list[tuple[float, np.ndarray, np.ndarray]]:
    """Groups of ``(origin, offsets, weights)`` covering the support of ``v``."""
    cap = 1.0 / (4.0 * max(kmax, 1))
    groups = []
    for a, b, el, er in v._segments():
        if el is not None and er is not None:
            halves = [(a, +1.0, (b - a) / 2, el), (b, -1.0, (b - a) / 2, er)]
        elif er is not None:
            halves = [(b, -1.0, b - a, er)]
        else:
            halves = [(a, +1.0, b - a, el)]
        for origin, sign, length, expo in halves:
            panels = []
            for lo, hi in _graded_panels(length, expo):
                panels.extend(_split(lo, hi, cap))
            lo = np.array([p[0] for p in panels])
            hi = np.array([p[1] for p in panels])
            half = 0.5 * (hi - lo)
            mid = 0.5 * (hi + lo)
            off = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
            wts = (half[:, None] * _GL_W[None, :]).ravel()
            groups.append((origin, sign * off, wts))
    return groups


def _quadrature_coefficients(v: FunctionDescriptor, K: int) -> np.ndarray:
    out = np.zeros(K)
    k = np.arange(1, K + 1, dtype=float)
    for origin, off, wts in quadrature_nodes(v, K):
        vals = v._local(origin, off)
        if not np.all(np.isfinite(vals)):
            raise EvaluationError(f"{v} produced non-finite samples during quadrature")
        fw = vals * wts
        so, co = np.sin(k * np.pi * origin), np.cos(k * np.pi * origin)
        chunk = max(1, 4_000_000 // max(off.size, 1))
        for start in range(0, K, chunk):
            sl = slice(start, min(K, start + chunk))
            phase = np.pi * np.outer(k[sl], off)
            # sin(k pi (o + s)) by angle addition keeps s exact near the origin
            out[sl] += so[sl] * (np.cos(phase) @ fw) + co[sl] * (np.sin(phase) @ fw)
    return math.sqrt(2.0) * out


def _analytic_coefficients(v: FunctionDescriptor, K: int) -> np.ndarray:
    k = np.arange(1, K + 1, dtype=float)
    if v.kind == "characteristic":
        a = v.params[0]
        return math.sqrt(2.0) * (np.cos(k * np.pi * a) - np.cos(k * np.pi)) / (k * np.pi)
    if v.kind == "linear":
        sign = np.where(np.arange(1, K + 1) % 2 == 1, 1.0, -1.0)
        return math.sqrt(2.0) * sign / (k * np.pi)
    if v.kind == "sine_mode":
        out = np.zeros(K)
        m = int(v.params[0])
        if m <= K:
            out[m - 1] = 1.0
        return out
    if v.kind == "zero":
        return np.zeros(K)
    raise InvalidInputError(f"no closed form for {v.kind}")


@lru_cache(maxsize=64)
def _cached_coefficients(v: FunctionDescriptor, K: int, method: str) -> np.ndarray:
    if method == "analytic" or (method == "auto" and v.is_analytic):
        out = _analytic_coefficients(v, K)
    else:
        out = _quadrature_coefficients(v, K)
    out.setflags(write=False)
    return out


def sine_coefficients(v: FunctionDescriptor, K: int, method: str = "auto") -> SineCoefficients:
    """First ``K`` coefficients ``(v, phi_k)``.

    ``method`` is ``"auto"`` (closed form when available), ``"analytic"`` or
    ``"quadrature"``.
    """
    if int(K) != K or K < 1:
        raise InvalidInputError(f"K must be a positive integer, got {K!r}")
    if method not in {"auto", "analytic", "quadrature"}:
        raise InvalidInputError(f"unknown method {method!r}")
    return SineCoefficients(_cached_coefficients(v, int(K), method))


def sine_synthesis(coeffs: np.ndarray, N: int) -> np.ndarray:
    """``sum_k c_k sqrt(2) sin(k pi x_i)`` at the interior nodes, k = 1..N-1."""
    c = np.asarray(coeffs, dtype=float)
    if c.shape[0] != N - 1:
        raise InvalidInputError(f"need {N - 1} coefficients, got {c.shape[0]}")
    if N == 2:
        return math.sqrt(2.0) * c.copy()
    # DST-I: y_i = 2 sum_k c_k sin(pi i k / N)
    return dst(c, type=1) / math.sqrt(2.0)


def project_PN_on_grid(v: FunctionDescriptor, N: int) -> np.ndarray:
    """Grid values of the projection onto the first N-1 sine modes."""
    grid = Grid(N)
    coeffs = sine_coefficients(v, grid.N - 1).values
    return sine_synthesis(coeffs, grid.N)


def sample_on_grid(v: FunctionDescriptor, N: int) -> np.ndarray:
    """Pointwise samples at the interior nodes x_1..x_{N-1}."""
    grid = Grid(N)
    vals = np.asarray(v(grid.interior), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise EvaluationError(f"{v} is not finite at every interior node of N={grid.N}")
    return vals
