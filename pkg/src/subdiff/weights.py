"""Convolution weights of the averaged L1 and averaged SBD time discretisations.

Both families scale as ``tau**(1 - alpha)`` times a tau-free sequence, so the
tau-free part is cached per ``(scheme, alpha, n)`` and the prefactor applied on
use.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import DomainError, InvalidInputError

__all__ = ["Scheme", "WeightSequence", "l1bar_weights", "sbd_weights", "weights", "l1bar_partial_sums"]


class Scheme(str, enum.Enum):
    L1BAR = "l1bar"
    SBDBAR = "sbdbar"

    @classmethod
    def parse(cls, value) -> "Scheme":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "").replace("-", "")
        aliases = {"l1bar": cls.L1BAR, "l1": cls.L1BAR, "sbdbar": cls.SBDBAR, "sbd": cls.SBDBAR}
        if key not in aliases:
            raise InvalidInputError(f"unknown temporal scheme {value!r}")
        return aliases[key]


@dataclass(frozen=True)
class WeightSequence:
    alpha: float
    tau: float
    scheme: Scheme
    values: np.ndarray

    def __len__(self) -> int:
        return self.values.shape[0]


def _check(alpha: float, tau: float, n: int) -> None:
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if not tau > 0.0:
        raise DomainError(f"tau must be positive, got {tau}")
    if int(n) != n or n < 1:
        raise InvalidInputError(f"n must be a positive integer, got {n!r}")


@lru_cache(maxsize=128)
def _l1bar_partial_unit(alpha: float, n: int) -> np.ndarray:
    k = np.arange(n, dtype=float)
    # difference form is fine for k up to ~1e5; beyond that cancellation bites
    b = ((k + 1.0) ** (2.0 - alpha) - k ** (2.0 - alpha)) / math.gamma(3.0 - alpha)
    b.setflags(write=False)
    return b


@lru_cache(maxsize=128)
def _l1bar_unit(alpha: float, n: int) -> np.ndarray:
    b = _l1bar_partial_unit(alpha, n)
    d = np.empty(n)
    d[0] = b[0]
    d[1:] = b[1:] - b[:-1]
    d.setflags(write=False)
    return d


@lru_cache(maxsize=128)
def _sbd_unit(alpha: float, n: int) -> np.ndarray:
    g = _kernels.miller(1.5, -2.0, 0.5, alpha - 1.0, n)
    g.setflags(write=False)
    return g


def l1bar_partial_sums(alpha: float, tau: float, n: int) -> np.ndarray:
    """``b_0 .. b_{n-1}``: the running sums of the averaged-L1 weights."""
    _check(alpha, tau, n)
    b = tau ** (1.0 - alpha) * _l1bar_partial_unit(float(alpha), int(n))
    b.setflags(write=False)
    return b


def l1bar_weights(alpha: float, tau: float, n: int) -> WeightSequence:
    _check(alpha, tau, n)
    vals = tau ** (1.0 - alpha) * _l1bar_unit(float(alpha), int(n))
    vals.setflags(write=False)
    return WeightSequence(float(alpha), float(tau), Scheme.L1BAR, vals)


def sbd_weights(alpha: float, tau: float, n: int) -> WeightSequence:
    """Taylor coefficients of ``((3/2 - 2 xi + xi**2/2) / tau) ** (alpha - 1)``."""
    _check(alpha, tau, n)
    vals = tau ** (1.0 - alpha) * _sbd_unit(float(alpha), int(n))
    vals.setflags(write=False)
    return WeightSequence(float(alpha), float(tau), Scheme.SBDBAR, vals)


def weights(scheme, alpha: float, tau: float, n: int) -> WeightSequence:
    scheme = Scheme.parse(scheme)
    if scheme is Scheme.L1BAR:
        return l1bar_weights(alpha, tau, n)
    return sbd_weights(alpha, tau, n)
