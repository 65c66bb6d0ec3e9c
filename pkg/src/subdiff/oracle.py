"""Contour-quadrature reference for the homogeneous semi-discrete problem.

For one eigencomponent the semi-discrete solution is multiplied by

    e(t; lam) = (1 / 2 pi i) \\int_Gamma e^{zt} z^{alpha-1} / (z^alpha + lam) dz,

(the Mittag-Leffler function ``E_alpha(-lam t^alpha)``).  Gamma is the pair of
rays ``arg z = +-theta`` joined by a small arc of radius ``rmin`` around the
origin.  Conjugate symmetry reduces the rays to ``Im(I_upper) / pi`` and the
arc to ``Re`` of its upper half.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.fft import dst

from .errors import AccuracyWarning, DomainError, InvalidInputError
from .mesh import eigenvalues
from .stepper import SolutionField

__all__ = ["ContourSpec", "kernel_e", "semi_discrete_reference"]

_PANEL_POINTS = 8
_ARC_POINTS = 32
_REFINE_TOL = 1e-8


@dataclass(frozen=True)
class ContourSpec:
    """Ray contour parameters.  ``None`` radii default relative to ``t``.

    ``nodes`` is the number of Gauss points on one ray; they are laid out as
    8-point panels whose endpoints grow geometrically from ``rmin`` to ``rmax``.
    """

    theta: float = 3.0 * math.pi / 4.0
    nodes: int = 1280
    rmax: float | None = None
    rmin: float | None = None

    def __post_init__(self):
        if not math.pi / 2 < self.theta < math.pi:
            raise DomainError(f"theta must lie in (pi/2, pi), got {self.theta}")
        if self.nodes < 8:
            raise InvalidInputError(f"need at least 8 nodes per ray, got {self.nodes}")
        if self.rmin is not None and self.rmax is not None and not 0 < self.rmin < self.rmax:
            raise InvalidInputError("need 0 < rmin < rmax")

    def radii(self, t: float) -> tuple[float, float]:
        rmax = 50.0 / t if self.rmax is None else self.rmax
        rmin = 1e-8 / t if self.rmin is None else self.rmin
        if not 0 < rmin < rmax:
            raise InvalidInputError(f"need 0 < rmin < rmax, got {rmin}, {rmax}")
        return rmin, rmax

    def refined(self) -> "ContourSpec":
        return ContourSpec(self.theta, 2 * self.nodes, self.rmax, self.rmin)


def _ray_rule(rmin: float, rmax: float, nodes: int):
    npan = max(1, nodes // _PANEL_POINTS)
    x, w = leggauss(_PANEL_POINTS)
    edges = np.linspace(math.log(rmin), math.log(rmax), npan + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    s = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    ws = (half[:, None] * w[None, :]).ravel()
    r = np.exp(s)
    return r, ws * r  # dr = r ds


def _arc_rule(theta: float):
    x, w = leggauss(_ARC_POINTS)
    return 0.5 * theta * (x + 1.0), 0.5 * theta * w


def _evaluate(t: float, lam: np.ndarray, alpha: float, spec: ContourSpec) -> np.ndarray:
    rmin, rmax = spec.radii(t)
    lam = lam[:, None]
    # rays: (1/pi) Im \int_rmin^rmax F(r e^{i theta}) e^{i theta} dr
    r, wr = _ray_rule(rmin, rmax, spec.nodes)
    eth = np.exp(1j * spec.theta)
    z = r * eth
    za = np.exp(alpha * np.log(z))
    vals = np.exp(z * t) * (za / z) / (za[None, :] + lam) * eth
    ray = (vals @ wr).imag / math.pi
    # arc |z| = rmin, arg in [-theta, theta]: (1/pi) \int_0^theta Re(F(z) z) dphi
    phi, wp = _arc_rule(spec.theta)
    za_arc = rmin**alpha * np.exp(1j * alpha * phi)
    z_arc = rmin * np.exp(1j * phi)
    arc_vals = np.exp(z_arc * t) * za_arc / (za_arc[None, :] + lam)
    arc = (arc_vals @ wp).real / math.pi
    return ray + arc


def kernel_e(t: float, lam, alpha: float, spec: ContourSpec | None = None, *, check: bool = True):
    """``E_alpha(-lam t**alpha)`` by quadrature on the sector contour.

    ``lam`` may be a scalar or an array.  With ``check`` the rule is repeated
    with twice the nodes and an :class:`AccuracyWarning` is issued when the
    relative change exceeds 1e-8.
    """
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    spec = spec or ContourSpec()
    scalar = np.ndim(lam) == 0
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=float))
    if np.any(lam_arr < 0):
        raise DomainError("lambda must be nonnegative")
    out = _evaluate(float(t), lam_arr, float(alpha), spec)
    if check:
        fine = _evaluate(float(t), lam_arr, float(alpha), spec.refined())
        change = np.abs(fine - out) / np.maximum(np.abs(fine), 1e-300)
        if np.any(change > _REFINE_TOL):
            warnings.warn(
                f"contour quadrature changed by {change.max():.2e} (relative) under refinement",
                AccuracyWarning,
                stacklevel=2,
            )
    return float(out[0]) if scalar else out


def _to_modes(u: np.ndarray, N: int) -> np.ndarray:
    # eigenvector matrix is symmetric orthogonal: V = sqrt(2/N) sin(pi j k / N)
    if N == 2:
        return u.copy()
    return math.sqrt(2.0 / N) * 0.5 * dst(u, type=1)


def semi_discrete_reference(
    u0_vec, t: float, alpha: float, N: int, spec: ContourSpec | None = None
) -> SolutionField:
    """Exact-in-time solution of ``D^alpha (u - u0) + A u = 0`` at time ``t``."""
    u0 = np.asarray(getattr(u0_vec, "values", u0_vec), dtype=float)
    if u0.shape != (N - 1,):
        raise InvalidInputError(f"u0 must have length {N - 1}, got {u0.shape}")
    modes = _to_modes(u0, N)
    modes = modes * kernel_e(t, eigenvalues(N), alpha, spec)
    return SolutionField(_to_modes(modes, N), float(t))
