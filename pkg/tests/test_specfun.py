"""Special-function kernel tests against independent oracles.

Oracles used here and nowhere in the package:
  * a Lanczos gamma approximation (for the gamma ratio),
  * brute-force partial sums of the defining series via math.fsum,
  * half-integer closed forms (sin/cos/sinh),
  * scipy.special as an external cross-check for J_nu and its zeros.
"""

import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from wedgehybrid.errors import DomainError, RangeError
from wedgehybrid.specfun import (
    DEFAULT_CONTROL,
    SeriesControl,
    bessel_i,
    bessel_j,
    bessel_series,
    bessel_series_deriv,
    bessel_series_m1,
    bessel_zero,
    gamma_ratio,
)

# --- independent oracles ---------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS_C = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
]


def lanczos_gamma(x: float) -> float:
    """Independent gamma oracle (Lanczos, g=7, n=9), ~1e-13 relative."""
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * lanczos_gamma(1.0 - x))
    x -= 1.0
    a = _LANCZOS_C[0]
    t = x + _LANCZOS_G + 0.5
    for i in range(1, 9):
        a += _LANCZOS_C[i] / (x + i)
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * a


def brute_series(nu: float, z: complex, terms: int) -> complex:
    """Direct partial sum with explicit factorial products."""
    vals = [1.0 + 0.0j]
    for k in range(1, terms + 1):
        fact = 1.0
        for j in range(1, k + 1):
            fact *= j * (j + nu)
        vals.append((-1) ** k * (z / 4.0) ** k / fact)
    re = math.fsum(v.real for v in vals)
    im = math.fsum(v.imag for v in vals)
    return complex(re, im)


# --- gamma ratio -----------------------------------------------------------


def test_gamma_ratio_half_is_minus_two():
    assert gamma_ratio(0.5) == pytest.approx(-2.0, rel=1e-14)


def test_gamma_ratio_identity_cross_check():
    # -Gamma(1/2)/Gamma(3/2) must equal Gamma(-1/2)/Gamma(1/2) = -2
    assert -math.gamma(0.5) / math.gamma(1.5) == pytest.approx(-2.0, rel=1e-14)
    assert gamma_ratio(0.5) == pytest.approx(-math.gamma(0.5) / math.gamma(1.5), rel=1e-13)


def test_gamma_ratio_sign_and_lanczos_oracle():
    v = gamma_ratio(0.75)
    assert v < 0.0
    ref = lanczos_gamma(-0.75 + 1.0) / (-0.75) / lanczos_gamma(0.75)
    assert v == pytest.approx(ref, rel=1e-12)


def test_gamma_ratio_reflection_identity_grid():
    for beta in np.linspace(0.5, 0.99, 50):
        direct = math.gamma(-beta) / math.gamma(beta)
        assert gamma_ratio(beta) == pytest.approx(direct, rel=1e-13)


def test_gamma_ratio_domain():
    with pytest.raises(DomainError):
        gamma_ratio(0.3)
    with pytest.raises(DomainError):
        gamma_ratio(1.0)


# --- the series ------------------------------------------------------------


def test_series_at_zero_is_one():
    assert bessel_series(0.7, 0.0) == 1.0


def test_series_vanishes_at_sine_zero():
    # B_{1/2}(z) = sin(sqrt z)/sqrt z, zero at z = pi^2
    assert abs(bessel_series(0.5, math.pi**2)) < 1e-12


def test_series_negative_argument_all_positive_terms():
    # at z = -1 the signs (-1)^k (-1)^k cancel: equals the |z| modified sum
    got = bessel_series(0.5, -1.0)
    ref = brute_series(0.5, -1.0, 40).real
    assert got == pytest.approx(ref, rel=1e-14)
    assert got > 1.0


def test_series_matches_brute_force_complex():
    z = 3.0 - 2.0j
    got = bessel_series(0.8, z)
    ref = brute_series(0.8, z, 60)
    assert abs(got - ref) / abs(ref) < 1e-13


def test_series_m1_small_argument_no_cancellation():
    z = 1e-9
    got = bessel_series_m1(0.6, z)
    # leading term -z/(4*(1+nu))
    assert got == pytest.approx(-z / (4 * 1.6), rel=1e-9)


def test_series_deriv_matches_finite_difference():
    h = 1e-6
    for nu in (0.5, -0.75, 1.3):
        for z in (0.3, 5.0, -4.0):
            fd = (bessel_series(nu, z + h) - bessel_series(nu, z - h)) / (2 * h)
            assert bessel_series_deriv(nu, z) == pytest.approx(fd, rel=1e-8)


def test_series_window_and_convergence_errors():
    with pytest.raises(RangeError):
        bessel_series(0.5, 401.0)
    with pytest.raises(DomainError):
        bessel_series(-1.2, 1.0)
    with pytest.raises(DomainError):
        SeriesControl(rel_tol=2.0)
    with pytest.raises(DomainError):
        SeriesControl(max_terms=5)


def test_series_consistency_higher_max_terms():
    # doubling the term budget must not move values (grid invariant)
    zs = np.linspace(-100.0, 100.0, 81)
    hi = SeriesControl(rel_tol=1e-15, max_terms=800)
    for beta in (0.5, 0.6, 0.75, 0.9):
        for nu in (beta, -beta):
            a = bessel_series(nu, zs)
            b = bessel_series(nu, zs, hi)
            assert np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-30)) < 1e-12


@settings(max_examples=25, deadline=None)
@given(
    nu=st.floats(min_value=-0.9, max_value=5.0),
    z=st.floats(min_value=-100.0, max_value=100.0),
)
def test_series_property_budget_independent(nu, z):
    a = bessel_series(nu, z)
    b = bessel_series(nu, z, SeriesControl(max_terms=400))
    assert a == pytest.approx(b, rel=1e-12, abs=1e-250)


# --- J and I ---------------------------------------------------------------


def test_bessel_j_half_integer_closed_form():
    w = math.pi / 2
    assert bessel_j(0.5, w) == pytest.approx(2.0 / math.pi, rel=1e-13)


def test_bessel_j_zero_argument():
    assert bessel_j(1.0, 0.0) == 0.0
    with pytest.raises(DomainError):
        bessel_j(-0.5, 0.0)


def test_bessel_j_brute_force_oracle():
    got = bessel_j(0.75, 1.0)
    pref = 0.5**0.75 / lanczos_gamma(1.75)
    ref = pref * brute_series(0.75, 1.0, 60).real
    assert got == pytest.approx(ref, rel=1e-13)


def test_bessel_j_half_integer_reduction_interval():
    xs = np.linspace(0.1, 15.0, 120)
    got = bessel_j(0.5, xs)
    ref = np.sqrt(2.0 / (np.pi * xs)) * np.sin(xs)
    assert np.max(np.abs(got - ref) / np.maximum(np.abs(ref), 1e-12)) < 1e-11


def test_bessel_j_against_scipy():
    for nu in (-0.9, -0.5, 0.75, 2.4):
        for x in (0.3, 2.0, 11.0):
            assert bessel_j(nu, x) == pytest.approx(float(sp.jv(nu, x)), rel=1e-10)


def test_bessel_j_complex_principal_branch():
    w = 1.0 + 1.0j
    got = bessel_j(0.75, w)
    pref = (w / 2.0) ** 0.75 / math.gamma(1.75)
    ref = pref * brute_series(0.75, w * w, 60)
    assert abs(got - ref) / abs(ref) < 1e-12


def test_bessel_i_half_integer_closed_form():
    assert bessel_i(0.5, 1.0) == pytest.approx(math.sqrt(2.0 / math.pi) * math.sinh(1.0), rel=1e-13)


def test_bessel_i_vanishes_at_origin_for_positive_order():
    assert bessel_i(0.6, 1e-12) < 1e-7
    assert bessel_i(0.6, 0.0) == 0.0


def test_bessel_i_term_doubling_oracle():
    got = bessel_i(0.75, 2.0)
    a = brute_series(0.75, -4.0, 30).real
    b = brute_series(0.75, -4.0, 60).real
    assert abs(a - b) < 1e-13 * abs(b)
    ref = 1.0**0.75 / lanczos_gamma(1.75) * b
    assert got == pytest.approx(ref, rel=1e-12)


def test_bessel_i_against_scipy():
    for nu in (-0.75, 0.5, 1.3):
        for x in (0.5, 3.0, 10.0):
            assert bessel_i(nu, x) == pytest.approx(float(sp.iv(nu, x)), rel=1e-11)


# --- zeros -----------------------------------------------------------------


def test_zero_half_order_multiples_of_pi():
    assert bessel_zero(0.5, 1) == pytest.approx(math.pi, rel=1e-13)
    assert bessel_zero(0.5, 3) == pytest.approx(3 * math.pi, rel=1e-13)


def test_zero_order_one_table_value():
    # frozen from the bisection oracle below; agrees with standard tables
    assert bessel_zero(1.0, 1) == pytest.approx(3.8317059702075123, rel=1e-12)


def test_zero_bisection_oracle():
    # independent bracketing bisection on scipy's J_1
    lo, hi = 3.0, 4.5
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if sp.jv(1.0, lo) * sp.jv(1.0, mid) <= 0:
            hi = mid
        else:
            lo = mid
    assert bessel_zero(1.0, 1) == pytest.approx(0.5 * (lo + hi), rel=1e-12)


def test_zeros_against_scipy_table():
    for nu in (0.5, 0.9, 1.8, 3.6):
        ref = sp.jn_zeros(int(round(nu)), 4) if float(nu).is_integer() else None
        for m in range(1, 5):
            z = bessel_zero(nu, m)
            assert abs(float(sp.jv(nu, z))) < 1e-12
            if ref is not None:
                assert z == pytest.approx(ref[m - 1], rel=1e-12)


def test_zero_residual_and_bracket_sign_change():
    for nu in (-0.75, 0.62, 2.3):
        for m in (1, 2, 3):
            z = bessel_zero(nu, m)
            assert abs(bessel_j(nu, z)) < 1e-10
            d = 1e-6 * z
            left = bessel_series(nu, (z - d) ** 2)
            right = bessel_series(nu, (z + d) ** 2)
            assert left * right < 0


def test_zero_interlacing_in_order():
    orders = [-0.9, -0.5, 0.5, 0.75, 1.5, 3.0]
    for m in (1, 2, 3):
        zs = [bessel_zero(nu, m) for nu in orders]
        assert all(a < b for a, b in zip(zs, zs[1:]))


def test_zero_window_guard():
    with pytest.raises(RangeError):
        bessel_zero(0.5, 7)
    with pytest.raises(DomainError):
        bessel_zero(0.5, 0)


def test_negative_fractional_order_zeros_cosine_form():
    # J_{-1/2} zeros are (m - 1/2) pi
    for m in (1, 2, 3, 4):
        assert bessel_zero(-0.5, m) == pytest.approx((m - 0.5) * math.pi, rel=1e-13)


def test_bessel_j_negative_argument_integer_order_keeps_sign():
    assert bessel_j(1.0, -2.0) == pytest.approx(-float(sp.jv(1.0, 2.0)), rel=1e-12)
    assert bessel_j(2.0, -2.0) == pytest.approx(float(sp.jv(2.0, 2.0)), rel=1e-12)


def test_bessel_j_negative_argument_fractional_order_principal_branch():
    # (w/2)^nu on the principal branch: compare against the direct formula
    w = -1.5
    got = bessel_j(0.75, w)
    import cmath

    pref = cmath.exp(0.75 * cmath.log(w / 2.0))
    ref = pref * brute_series(0.75, w * w, 60) / math.gamma(1.75)
    assert abs(got - ref) / abs(ref) < 1e-12
