"""Hot loops: Thomas elimination, the averaged-scheme time march, Miller's recurrence.

Every kernel exists twice: a numba ``@njit`` version and a plain numpy/Python
version with identical arithmetic.  ``SUBDIFF_DISABLE_NUMBA=1`` (or numba being
absent) selects the fallback at import time.  Both are always importable as
``*_numba`` / ``*_numpy`` so tests and the benchmark can compare them.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("SUBDIFF_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _DISABLED


def _jit(fn):
    if not HAVE_NUMBA:
        return fn
    return _njit(cache=True)(fn)


# ---------------------------------------------------------------------------
# Thomas algorithm for a symmetric Toeplitz tridiagonal system
#   diag * x_i + off * (x_{i-1} + x_{i+1}) = r_i
# ---------------------------------------------------------------------------


def _toeplitz_factor_py(diag, off, m):
    # modified upper coefficients c'_i and pivots; reused for every rhs
    cp = np.empty(m)
    piv = np.empty(m)
    piv[0] = diag
    cp[0] = off / diag
    for i in range(1, m):
        piv[i] = diag - off * cp[i - 1]
        cp[i] = off / piv[i]
    return cp, piv


def _toeplitz_solve_py(cp, piv, off, rhs, out):
    m = rhs.shape[0]
    out[0] = rhs[0] / piv[0]
    for i in range(1, m):
        out[i] = (rhs[i] - off * out[i - 1]) / piv[i]
    for i in range(m - 2, -1, -1):
        out[i] -= cp[i] * out[i + 1]
    return out


def _general_tridiag_py(lower, diag, upper, rhs):
    m = diag.shape[0]
    cp = np.empty(m)
    dp = np.empty(m)
    cp[0] = upper[0] / diag[0] if m > 1 else 0.0
    dp[0] = rhs[0] / diag[0]
    for i in range(1, m):
        denom = diag[i] - lower[i - 1] * cp[i - 1]
        if i < m - 1:
            cp[i] = upper[i] / denom
        dp[i] = (rhs[i] - lower[i - 1] * dp[i - 1]) / denom
    for i in range(m - 2, -1, -1):
        dp[i] -= cp[i] * dp[i + 1]
    return dp


# ---------------------------------------------------------------------------
# Averaged-scheme march
# ---------------------------------------------------------------------------


def _march_loops(w, tau, scale, u0, src, nsteps):
    """Loop form of the march; compiled by numba, far too slow uncompiled."""
    m = u0.shape[0]
    U = np.empty((nsteps + 1, m))
    V = np.zeros((nsteps + 1, m))
    for i in range(m):
        U[0, i] = u0[i]
    lead = w[0] / tau
    diag = lead + 1.5 * scale
    off = -0.75 * scale
    cp = np.empty(m)
    piv = np.empty(m)
    piv[0] = diag
    cp[0] = off / diag
    for i in range(1, m):
        piv[i] = diag - off * cp[i - 1]
        cp[i] = off / piv[i]
    hist = np.empty(m)
    rhs = np.empty(m)
    for n in range(1, nsteps + 1):
        back = n - 2 if n >= 2 else 0
        for i in range(m):
            hist[i] = 0.0
        # sum_{k=1}^{n-1} w_k V^{n-k}  -  sum_{k=0}^{n-2} w_k V^{n-1-k}
        for k in range(1, n):
            wk = w[k]
            row = n - k
            for i in range(m):
                hist[i] += wk * V[row, i]
        for k in range(0, n - 1):
            wk = w[k]
            row = n - 1 - k
            for i in range(m):
                hist[i] -= wk * V[row, i]
        for i in range(m):
            a = 2.0 * U[back, i]
            if i > 0:
                a -= U[back, i - 1]
            if i < m - 1:
                a -= U[back, i + 1]
            rhs[i] = (0.5 * (src[n - 1, i] + src[n, i]) - 0.25 * scale * a
                      - hist[i] / tau + lead * u0[i])
        # forward/back substitution with the cached factorisation
        U[n, 0] = rhs[0] / piv[0]
        for i in range(1, m):
            U[n, i] = (rhs[i] - off * U[n, i - 1]) / piv[i]
        for i in range(m - 2, -1, -1):
            U[n, i] -= cp[i] * U[n, i + 1]
        for i in range(m):
            x = U[n, i]
            if not np.isfinite(x):
                return U, n
            V[n, i] = x - u0[i]
    return U, 0


def _march_numpy(w, tau, scale, u0, src, nsteps):
    """Vectorised march: BLAS history sums, Python-level Thomas sweeps."""
    m = u0.shape[0]
    U = np.empty((nsteps + 1, m))
    V = np.zeros((nsteps + 1, m))
    U[0] = u0
    lead = w[0] / tau
    off = -0.75 * scale
    cp, piv = _toeplitz_factor_py(lead + 1.5 * scale, off, m)
    sol = np.empty(m)
    Au = np.empty(m)
    for n in range(1, nsteps + 1):
        back = U[n - 2] if n >= 2 else U[0]
        Au[:] = 2.0 * back
        Au[1:] -= back[:-1]
        Au[:-1] -= back[1:]
        Au *= scale
        if n >= 2:
            past = V[n - 1:0:-1]
            hist = w[1:n] @ past - w[0:n - 1] @ past
        else:
            hist = 0.0
        rhs = 0.5 * (src[n - 1] + src[n]) - 0.25 * Au - hist / tau + lead * u0
        _toeplitz_solve_py(cp, piv, off, rhs, sol)
        if not np.all(np.isfinite(sol)):
            return U, n
        U[n] = sol
        V[n] = sol - u0
    return U, 0


# ---------------------------------------------------------------------------
# Miller recurrence for coefficients of (c0 + c1 x + c2 x^2)^p
# ---------------------------------------------------------------------------


def _miller_py(c0, c1, c2, p, n):
    g = np.empty(n)
    g[0] = c0 ** p
    for m in range(1, n):
        acc = (p + 1.0 - m) * c1 * g[m - 1]
        if m >= 2:
            acc += (2.0 * (p + 1.0) - m) * c2 * g[m - 2]
        g[m] = acc / (m * c0)
    return g


toeplitz_factor_numpy = _toeplitz_factor_py
toeplitz_solve_numpy = _toeplitz_solve_py
tridiag_numpy = _general_tridiag_py
march_numpy = _march_numpy
miller_numpy = _miller_py

if HAVE_NUMBA:
    toeplitz_factor_numba = _jit(_toeplitz_factor_py)
    toeplitz_solve_numba = _jit(_toeplitz_solve_py)
    tridiag_numba = _jit(_general_tridiag_py)
    march_numba = _jit(_march_loops)
    miller_numba = _jit(_miller_py)
else:  # pragma: no cover
    toeplitz_factor_numba = toeplitz_factor_numpy
    toeplitz_solve_numba = toeplitz_solve_numpy
    tridiag_numba = tridiag_numpy
    march_numba = march_numpy
    miller_numba = miller_numpy

if USE_NUMBA:
    toeplitz_factor = toeplitz_factor_numba
    toeplitz_solve = toeplitz_solve_numba
    tridiag = tridiag_numba
    march = march_numba
    miller = miller_numba
else:
    toeplitz_factor = toeplitz_factor_numpy
    toeplitz_solve = toeplitz_solve_numpy
    tridiag = tridiag_numpy
    march = march_numpy
    miller = miller_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
