"""Special-function layer: frozen series/integral oracles plus identity
properties. Every reference value below is computed by a routine that shares
no code path with the implementation under test."""

import math

import numpy as np
import pytest
import scipy.integrate as si
from hypothesis import given, settings, strategies as st

from feynkac import specfun as sf
from feynkac.errors import (DomainError, EvalOverflowError, PoleError)


# ---------------------------------------------------------------------------
# oracles (frozen; independent of scipy.special wrappers)
# ---------------------------------------------------------------------------

def oracle_bessel_i_series(nu: float, z: float, terms: int = 60) -> float:
    """Ascending series I_nu(z) = sum_k (z/2)^(nu+2k) / (k! Gamma(nu+k+1))."""
    total = 0.0
    for k in range(terms):
        lg = (nu + 2 * k) * math.log(z / 2.0) - math.lgamma(k + 1) \
            - math.lgamma(nu + k + 1)
        total += math.exp(lg)
    return total


def oracle_bessel_k0_integral(z: float) -> float:
    """K_0(z) = integral_0^inf exp(-z cosh(u)) du."""
    val, err = si.quad(lambda u: math.exp(-z * math.cosh(u)), 0.0, 30.0,
                       epsabs=1e-14, epsrel=1e-13, limit=200)
    assert err < 1e-12
    return val


def oracle_1f1_series(a: float, b: float, z: float, terms: int = 120) -> float:
    """Ascending series of the confluent hypergeometric function."""
    term, total = 1.0, 1.0
    for k in range(terms):
        term *= (a + k) * z / ((b + k) * (k + 1))
        total += term
    return total


def oracle_tricomi_integral(a: float, b: float, z: float) -> float:
    """U(a, b, z) = (1/Gamma(a)) integral_0^inf e^{-z u} u^{a-1} (1+u)^{b-a-1} du
    for a > 0, z > 0."""
    val, err = si.quad(
        lambda u: math.exp(-z * u + (a - 1.0) * math.log(u)
                           + (b - a - 1.0) * math.log1p(u)),
        0.0, np.inf, epsabs=1e-14, epsrel=1e-13, limit=400)
    assert err < 1e-11
    return val / math.gamma(a)


def oracle_erf_series(x: float, terms: int = 50) -> float:
    total = 0.0
    for k in range(terms):
        total += (-1) ** k * x ** (2 * k + 1) / (math.factorial(k) * (2 * k + 1))
    return total * 2.0 / math.sqrt(math.pi)


# ---------------------------------------------------------------------------
# Bessel I / K
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("nu,z", [(0.0, 0.3), (0.5, 1.7), (1.0, 2.4),
                                  (2.75, 0.9), (4.0, 5.0)])
def test_bessel_i_against_series_oracle(nu, z):
    ref = oracle_bessel_i_series(nu, z)
    assert sf.bessel_i(nu, z) == pytest.approx(ref, rel=1e-13)
    assert sf.log_bessel_i(nu, z) == pytest.approx(math.log(ref), rel=1e-13)
    assert sf.bessel_i(nu, z, scaled=True) == pytest.approx(ref * math.exp(-z),
                                                            rel=1e-13)


@pytest.mark.parametrize("z", [0.4, 1.0, 3.2])
def test_bessel_k0_against_integral_oracle(z):
    assert sf.bessel_k(0.0, z) == pytest.approx(oracle_bessel_k0_integral(z),
                                                rel=1e-12)


def test_bessel_i_half_closed_form():
    # I_{1/2}(z) = sqrt(2/(pi z)) sinh(z)
    z = 1.3
    ref = math.sqrt(2.0 / (math.pi * z)) * math.sinh(z)
    assert sf.bessel_i(0.5, z) == pytest.approx(ref, rel=1e-14)


def test_log_bessel_i_large_argument_finite_and_asymptotic():
    # I_nu(z) ~ e^z / sqrt(2 pi z) for z >> nu^2
    for z in (1e3, 1e6):
        lg = sf.log_bessel_i(0.7, z)
        assert math.isfinite(lg)
        assert lg == pytest.approx(z - 0.5 * math.log(2 * math.pi * z), rel=1e-6)


def test_log_bessel_i_at_zero():
    assert sf.log_bessel_i(0.0, 0.0) == 0.0
    assert sf.log_bessel_i(2.0, 0.0) == -math.inf
    with pytest.raises(DomainError):
        sf.log_bessel_i(-0.5, 0.0)


def test_bessel_domain_and_overflow_errors():
    with pytest.raises(DomainError):
        sf.bessel_i(1.0, -1.0)
    with pytest.raises(DomainError):
        sf.bessel_k(1.0, 0.0)
    with pytest.raises(EvalOverflowError):
        sf.bessel_i(0.0, 1e4)
    assert math.isfinite(sf.bessel_i(0.0, 1e4, scaled=True))


@settings(max_examples=60, deadline=None)
@given(nu=st.floats(0.25, 6.0), z=st.floats(0.05, 40.0))
def test_bessel_i_three_term_recurrence(nu, z):
    # I_{nu-1}(z) - I_{nu+1}(z) = (2 nu / z) I_nu(z)
    lhs = sf.bessel_i(nu - 1.0, z, scaled=True) - sf.bessel_i(nu + 1.0, z, scaled=True)
    rhs = 2.0 * nu / z * sf.bessel_i(nu, z, scaled=True)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-14)


@settings(max_examples=60, deadline=None)
@given(nu=st.floats(0.0, 5.0, allow_subnormal=False), z=st.floats(0.1, 30.0))
def test_bessel_wronskian(nu, z):
    # I_nu(z) K_{nu+1}(z) + I_{nu+1}(z) K_nu(z) = 1/z, in scaled variables
    lhs = (sf.bessel_i(nu, z, scaled=True) * sf.bessel_k(nu + 1.0, z, scaled=True)
           + sf.bessel_i(nu + 1.0, z, scaled=True) * sf.bessel_k(nu, z, scaled=True))
    assert lhs == pytest.approx(1.0 / z, rel=1e-12)


# ---------------------------------------------------------------------------
# confluent hypergeometric pair
# ---------------------------------------------------------------------------

def test_1f1_special_value():
    # 1F1(1, 2, z) = (e^z - 1)/z
    assert sf.hypergeom_1f1(1.0, 2.0, 2.0) == pytest.approx(
        (math.e ** 2 - 1.0) / 2.0, rel=1e-14)


@pytest.mark.parametrize("a,b,z", [(0.75, 1.5, 0.9), (2.2, 3.7, -1.4),
                                   (1.3, 0.4, 2.5)])
def test_1f1_against_series_oracle(a, b, z):
    assert sf.hypergeom_1f1(a, b, z) == pytest.approx(
        oracle_1f1_series(a, b, z), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(a=st.floats(0.2, 3.0), b=st.floats(0.5, 5.0), z=st.floats(-8.0, 8.0))
def test_1f1_kummer_transform(a, b, z):
    # 1F1(a, b, z) = e^z 1F1(b-a, b, -z)
    lhs = sf.hypergeom_1f1(a, b, z)
    rhs = math.exp(z) * sf.hypergeom_1f1(b - a, b, -z)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-12)


def test_1f1_pole_at_nonpositive_integer_b():
    with pytest.raises(PoleError):
        sf.hypergeom_1f1(1.0, 0.0, 1.0)
    with pytest.raises(PoleError):
        sf.hypergeom_1f1(1.0, -2.0, 1.0)


def test_tricomi_against_integral_oracle():
    a, b, z = 0.7, 1.3, 2.0
    assert sf.tricomi_u(a, b, z) == pytest.approx(
        oracle_tricomi_integral(a, b, z), rel=1e-11)


def test_tricomi_power_law_special_case():
    # U(a, a+1, z) = z^{-a}
    assert sf.tricomi_u(1.5, 2.5, 3.0) == pytest.approx(3.0 ** -1.5, rel=1e-12)


# ---------------------------------------------------------------------------
# Whittaker pair
# ---------------------------------------------------------------------------

def test_whittaker_m_kummer_reduction():
    # M_{k,m}(z) = e^{-z/2} z^{m+1/2} 1F1(m - k + 1/2, 1 + 2m, z), with the
    # right side assembled from the frozen series oracle.
    k, m, z = 0.3, 0.8, 1.7
    ref = math.exp(-z / 2.0) * z ** (m + 0.5) * oracle_1f1_series(
        m - k + 0.5, 1.0 + 2.0 * m, z)
    assert sf.whittaker_m(k, m, z) == pytest.approx(ref, rel=1e-12)


def test_whittaker_w_large_z_asymptotic():
    # W_{k,m}(z) ~ e^{-z/2} z^k as z -> inf
    k, m, z = 0.4, 1.1, 80.0
    assert sf.whittaker_w(k, m, z) == pytest.approx(
        math.exp(-z / 2.0) * z ** k, rel=1e-2)


def test_whittaker_w_integral_oracle():
    # W_{k,m}(z) = e^{-z/2} z^k / Gamma(m - k + 1/2)
    #              * integral_0^inf e^{-u} u^{m-k-1/2} (1 + u/z)^{m+k-1/2} du
    k, m, z = -0.2, 0.9, 2.6
    val, err = si.quad(
        lambda u: math.exp(-u + (m - k - 0.5) * math.log(u)
                           + (m + k - 0.5) * math.log1p(u / z)),
        0.0, np.inf, epsabs=1e-14, epsrel=1e-13, limit=400)
    assert err < 1e-11
    ref = math.exp(-z / 2.0) * z ** k * val / math.gamma(m - k + 0.5)
    assert sf.whittaker_w(k, m, z) == pytest.approx(ref, rel=1e-11)


# ---------------------------------------------------------------------------
# gamma_ln, erf, and the Laplace-Bessel moment
# ---------------------------------------------------------------------------

def test_gamma_ln_and_erf():
    assert sf.gamma_ln(5.0) == pytest.approx(math.log(24.0), rel=1e-15)
    with pytest.raises(DomainError):
        sf.gamma_ln(0.0)
    for x in (0.3, 1.0, 2.5):
        assert sf.erf(x) == pytest.approx(oracle_erf_series(x), rel=1e-13)


@pytest.mark.parametrize("p,nu,s,c", [(0.0, 0.5, 1.2, 0.7),
                                      (1.5, 2.0, 0.8, 1.3),
                                      (-0.4, 1.0, 2.0, 0.2),
                                      (0.5, 0.0, 1.0, 3.0)])
def test_laplace_bessel_moment_against_quadrature(p, nu, s, c):
    val, err = si.quad(
        lambda y: math.exp(-s * y + sf.log_bessel_i(nu, 2.0 * c * math.sqrt(y))
                           + p * math.log(y)),
        0.0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=400)
    assert err < 1e-9 * max(1.0, abs(val))
    assert sf.laplace_bessel_moment(p, nu, s, c) == pytest.approx(val, rel=1e-10)


def test_laplace_bessel_moment_large_argument_stable():
    # c^2/s large enough that the 1F1 factor alone overflows a double while
    # the moment itself is still representable: the Kummer-transform fallback
    # must kick in. Reference from arbitrary-precision arithmetic.
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 50
    for p, nu, s, c in [(5.0, 0.0, 50.0, 185.0), (0.0, 1.0, 40.0, 160.0)]:
        q = p + 0.5 * nu + 1.0
        w = c * c / s
        ref = float(mp.mpf(c) ** nu * mp.gamma(q)
                    / (mp.gamma(nu + 1.0) * mp.mpf(s) ** q)
                    * mp.hyp1f1(q, nu + 1.0, w))
        assert sf.laplace_bessel_moment(p, nu, s, c) == pytest.approx(ref, rel=1e-10)


def test_laplace_bessel_moment_overflow_error():
    with pytest.raises(EvalOverflowError):
        sf.laplace_bessel_moment(0.0, 1.0, 0.05, 8.0)


def test_laplace_bessel_moment_domain_errors():
    with pytest.raises(DomainError):
        sf.laplace_bessel_moment(0.0, 0.5, -1.0, 1.0)
    with pytest.raises(DomainError):
        sf.laplace_bessel_moment(0.0, 0.5, 1.0, -1.0)
    with pytest.raises(DomainError):
        sf.laplace_bessel_moment(-2.0, 0.5, 1.0, 1.0)
    with pytest.raises(PoleError):
        sf.laplace_bessel_moment(1.0, -2.0, 1.0, 1.0)


def test_eval_policy_validation():
    with pytest.raises(ValueError):
        sf.EvalPolicy(rel_tol=0.0)
    with pytest.raises(ValueError):
        sf.EvalPolicy(max_terms=0)
