import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subdiff.errors import DomainError, InvalidInputError
from subdiff.weights import Scheme, l1bar_partial_sums, l1bar_weights, sbd_weights, weights

ALPHAS = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]


def composition_coefficients(alpha, n):
    """Taylor coefficients of (3/2 - 2x + x^2/2)^(alpha-1) by series multiplication.

    The quadratic factors as (1 - x)(3 - x)/2, so the power is the product of
    two binomial series.  All terms are positive, no cancellation.
    """
    p = alpha - 1.0
    a = np.empty(n)
    b = np.empty(n)
    a[0] = b[0] = 1.0
    for k in range(1, n):
        a[k] = a[k - 1] * (k - 1 - p) / k
        b[k] = b[k - 1] * (k - 1 - p) / (3.0 * k)
    return 1.5**p * np.convolve(a, b)[:n]


def test_b0_closed_form():
    ref = float(1 / mp.gamma(mp.mpf("2.5")))
    assert abs(l1bar_weights(0.5, 1.0, 4).values[0] - ref) < 1e-15
    assert ref == pytest.approx(0.7522528, abs=1e-7)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8])
@pytest.mark.parametrize("tau", [1.0, 1 / 64])
def test_b0_any_alpha(alpha, tau):
    b0 = l1bar_weights(alpha, tau, 1).values[0]
    assert b0 == pytest.approx(tau ** (1 - alpha) / math.gamma(3 - alpha), rel=1e-14)


def test_d1_value():
    d = l1bar_weights(0.5, 1.0, 3).values
    ref = float((mp.mpf(2) ** mp.mpf("1.5") - 2) / mp.gamma(mp.mpf("2.5")))
    assert d[1] == pytest.approx(ref, rel=1e-14)
    assert d[1] == pytest.approx(0.623187, abs=1e-6)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_l1bar_weights_positive_and_decreasing_tail(alpha):
    d = l1bar_weights(alpha, 1.0, 200).values
    assert np.all(d > 0)
    assert np.all(np.diff(d[1:]) < 0)


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("tau", [1.0, 0.01])
def test_telescoping(alpha, tau):
    n = 4097
    d = l1bar_weights(alpha, tau, n).values
    b = l1bar_partial_sums(alpha, tau, n)
    assert np.max(np.abs(np.cumsum(d) - b) / b) <= 1e-13


@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9])
def test_partial_sums_against_high_precision(alpha):
    # the difference form loses about log10(k) digits to cancellation
    n = 1025
    b = l1bar_partial_sums(alpha, 1.0, n)
    a = mp.mpf(alpha)
    ref = np.array([float(((k + 1) ** (2 - a) - mp.mpf(k) ** (2 - a)) / mp.gamma(3 - a)) for k in range(n)])
    rel = np.abs(b - ref) / ref
    assert np.all(rel <= 1e-15 * (np.arange(n) + 2))


@pytest.mark.parametrize("scheme", list(Scheme))
@pytest.mark.parametrize("alpha", [0.15, 0.5, 0.85])
def test_scaling_law(scheme, alpha):
    tau = 0.0137
    unit = weights(scheme, alpha, 1.0, 100).values
    scaled = weights(scheme, alpha, tau, 100).values
    np.testing.assert_allclose(scaled, tau ** (1 - alpha) * unit, rtol=1e-14, atol=0)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8])
@pytest.mark.parametrize("tau", [1.0, 0.25])
def test_g0(alpha, tau):
    g = sbd_weights(alpha, tau, 1).values
    assert g[0] == pytest.approx((1.5 / tau) ** (alpha - 1), rel=1e-15)


def test_g1_against_derivative():
    f = lambda x: (mp.mpf("1.5") - 2 * x + x**2 / 2) ** mp.mpf("-0.5")
    with mp.workdps(30):
        ref = float(mp.diff(f, 0))
    g = sbd_weights(0.5, 1.0, 2).values
    assert g[1] == pytest.approx(ref, rel=1e-14)
    assert g[1] == pytest.approx(0.544331, abs=1e-6)


def test_sbd_against_mpmath_taylor():
    with mp.workdps(40):
        alpha = mp.mpf("0.35")
        coeffs = mp.taylor(lambda x: (mp.mpf("1.5") - 2 * x + x**2 / 2) ** (alpha - 1), 0, 20)
    g = sbd_weights(0.35, 1.0, 21).values
    np.testing.assert_allclose(g, [float(c) for c in coeffs], rtol=1e-13)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_miller_matches_composition(alpha):
    n = 256
    g = sbd_weights(alpha, 1.0, n).values
    ref = composition_coefficients(alpha, n)
    assert np.max(np.abs(g - ref) / np.abs(ref)) <= 1e-11


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8])
def test_sbd_generating_function_at_half(alpha):
    tau = 1.0
    g = sbd_weights(alpha, tau, 128).values
    total = np.sum(g * 0.5 ** np.arange(128))
    assert abs(total - ((1.5 - 1.0 + 0.125) / tau) ** (alpha - 1)) <= 1e-8


@settings(max_examples=40, deadline=None)
@given(alpha=st.floats(0.01, 0.99), n=st.integers(1, 300))
def test_sbd_composition_property(alpha, n):
    g = sbd_weights(alpha, 1.0, n).values
    ref = composition_coefficients(alpha, n)
    assert np.max(np.abs(g - ref) / np.abs(ref)) <= 1e-11


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.3, 1.5, float("nan")])
@pytest.mark.parametrize("scheme", list(Scheme))
def test_alpha_domain(alpha, scheme):
    with pytest.raises(DomainError):
        weights(scheme, alpha, 1.0, 4)


def test_bad_tau_and_n():
    with pytest.raises(DomainError):
        l1bar_weights(0.5, 0.0, 4)
    with pytest.raises(InvalidInputError):
        sbd_weights(0.5, 1.0, 0)
    with pytest.raises(InvalidInputError):
        weights("bdf3", 0.5, 1.0, 4)


def test_scheme_aliases():
    assert Scheme.parse("L1") is Scheme.L1BAR
    assert Scheme.parse("sbd-bar") is Scheme.SBDBAR


def test_weights_are_read_only():
    w = l1bar_weights(0.5, 1.0, 8)
    w2 = l1bar_weights(0.5, 1.0, 8)
    np.testing.assert_array_equal(w.values, w2.values)
    unit = sbd_weights(0.4, 1.0, 8).values
    with pytest.raises(ValueError):
        unit[0] = 0.0
