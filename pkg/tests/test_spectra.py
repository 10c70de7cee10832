"""Spectral classification tests.

Oracles: half-order Bessel zeros are multiples of pi (sine form), alpha=0
levels are the squared zeros of J_{-beta}, the slit-disk forms reduce to
cot/coth equations solved here independently by bisection, and quadrature
checks eigenfunction normalization.
"""

import math

import numpy as np
import pytest

from wedgehybrid.errors import DomainError, RangeError
from wedgehybrid.qkrein import q_wedge, vertex_trace
from wedgehybrid.quadrature import wedge_quadrature
from wedgehybrid.specfun import SeriesControl, bessel_zero
from wedgehybrid.spectra import (
    SpectralTag,
    classify_spectrum,
    default_e_max,
    embedded_spectrum,
    friedrichs_eigenvalues,
    gap_root,
    hybrid_discrete_spectrum,
    lead_bound_state,
    nonfriedrichs_spectrum,
    singleton_root,
    wedge_eigenfunction,
)
from wedgehybrid.types import CouplingMatrix, WedgeGeometry

HALF = WedgeGeometry(0.5)
RELAXED = SeriesControl(hp_target=1e-8)


def coth_root(alpha):
    """Independent bisection for -sqrt(|l|) coth(sqrt|l|) = alpha, alpha < -1."""
    f = lambda lam: -math.sqrt(-lam) / math.tanh(math.sqrt(-lam)) - alpha
    lo, hi = -max(4.0 * alpha * alpha, 4.0), -1e-12
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# --- Friedrichs spectrum -----------------------------------------------------


def test_friedrichs_half_beta_low_modes():
    ev = friedrichs_eigenvalues(HALF, 100.0)
    lam2 = [e[0] for e in ev]
    assert lam2[0] == pytest.approx(math.pi**2, rel=1e-12)
    assert math.pi**2 * 4 in [pytest.approx(v, rel=1e-12) for v in lam2]
    assert 3.8317059702075123**2 in [pytest.approx(v, rel=1e-10) for v in lam2]
    assert lam2 == sorted(lam2)


def test_friedrichs_n1_zeros_of_sine():
    ev = [e for e in friedrichs_eigenvalues(HALF, 100.0) if e[2] == 1]
    assert [e[0] for e in ev[:3]] == pytest.approx(
        [math.pi**2, 4 * math.pi**2, 9 * math.pi**2], rel=1e-12
    )


def test_friedrichs_window_error():
    with pytest.raises(RangeError):
        friedrichs_eigenvalues(HALF, 400.0)


def test_default_e_max_inside_window():
    for beta in (0.5, 0.75, 0.95):
        e = default_e_max(WedgeGeometry(beta))
        assert 0 < e <= 350.0


# --- eigenfunctions ----------------------------------------------------------


def test_eigenfunction_boundary_zeros():
    g = WedgeGeometry(0.7)
    assert wedge_eigenfunction(g, 1, 1, 0.5, 0.0) == 0.0
    assert abs(wedge_eigenfunction(g, 2, 3, 1.0, 1.0)) < 1e-10


def test_eigenfunction_normalized():
    g = WedgeGeometry(0.6)
    val = wedge_quadrature(
        lambda r, t: wedge_eigenfunction(g, 1, 1, r, t, RELAXED) ** 2, g
    ).value
    assert val == pytest.approx(1.0, abs=1e-6)


def test_eigenfunction_orthonormality():
    g = WedgeGeometry(0.55)
    pairs = [(1, 1), (2, 1), (1, 2), (2, 2), (3, 3)]
    for i, (m1, n1) in enumerate(pairs):
        for m2, n2 in pairs[i:]:
            val = wedge_quadrature(
                lambda r, t: wedge_eigenfunction(g, m1, n1, r, t, RELAXED)
                * wedge_eigenfunction(g, m2, n2, r, t, RELAXED),
                g,
            ).value
            expect = 1.0 if (m1, n1) == (m2, n2) else 0.0
            assert val == pytest.approx(expect, abs=1e-5)


def test_vertex_trace_vanishes_for_n2_mode():
    g = WedgeGeometry(0.8)
    res = vertex_trace(lambda r, t: wedge_eigenfunction(g, 1, 2, r, t, RELAXED), g)
    assert abs(res.value) < 1e-5


# --- embedded set ------------------------------------------------------------


def test_embedded_spectrum_half():
    pts = embedded_spectrum(HALF, 40.0)
    lams = [p.lam for p in pts]
    assert lams[0] == pytest.approx(3.8317059702075123**2, rel=1e-10)  # (1, 2)
    assert all(p.n > 1 for p in pts)
    assert all(p.tag is SpectralTag.FRIEDRICHS_EMBEDDED for p in pts)


def test_embedded_empty_below_first_n2_level():
    first_n2 = bessel_zero(2 * 0.5, 1) ** 2
    assert embedded_spectrum(HALF, first_n2 * 0.9) == []


# --- non-Friedrichs levels ---------------------------------------------------


def test_sigma_plus_half_alpha_zero_closed_form():
    sa = nonfriedrichs_spectrum(HALF, 0.0, 300.0)
    expect = [(math.pi * (k - 0.5)) ** 2 for k in range(1, 6)]
    got = [p.lam for p in sa.plus[:5]]
    assert got == pytest.approx(expect, rel=1e-10)
    assert sa.minus == [] and sa.zero == []


def test_sigma_plus_alpha_zero_general_beta():
    for beta in (0.6, 0.75, 0.9):
        g = WedgeGeometry(beta)
        sa = nonfriedrichs_spectrum(g, 0.0, 300.0)
        expect = [bessel_zero(-beta, k) ** 2 for k in range(1, len(sa.plus) + 1)]
        assert [p.lam for p in sa.plus] == pytest.approx(expect, rel=1e-8)


def test_sigma_alpha_minus_one_contains_exact_zero():
    sa = nonfriedrichs_spectrum(HALF, -1.0, 100.0)
    assert sa.zero[0].lam == 0.0
    assert sa.plus[0].lam == 0.0


def test_singleton_sign_vs_alpha():
    for beta in (0.5, 0.7, 0.9):
        g = WedgeGeometry(beta)
        assert singleton_root(g, -3.0) < 0
        assert singleton_root(g, -1.0) == 0.0
        first_pole = bessel_zero(beta, 1) ** 2
        r = singleton_root(g, 2.0)
        assert 0 < r < first_pole


def test_singleton_coth_oracle():
    for alpha in (-2.0, -5.5):
        assert singleton_root(HALF, alpha) == pytest.approx(coth_root(alpha), rel=1e-9)


def test_gap_roots_interlace():
    for beta in (0.5, 0.7, 0.9):
        g = WedgeGeometry(beta)
        for alpha in (-3.0, -1.0, 0.0, 2.0):
            for m in (1, 2, 3, 4):
                lo = bessel_zero(beta, m) ** 2
                hi = bessel_zero(beta, m + 1) ** 2
                root = gap_root(g, alpha, m)
                assert lo < root < hi


def test_roots_satisfy_equation():
    g = WedgeGeometry(0.65)
    sa = nonfriedrichs_spectrum(g, 1.3, 200.0)
    for p in sa.plus + sa.minus:
        if p.lam != 0.0:
            assert abs(float(np.real(q_wedge(g, p.lam))) - 1.3) < 1e-9


def test_singleton_out_of_window():
    with pytest.raises(RangeError):
        singleton_root(HALF, -1000.0)


# --- lead and hybrid ---------------------------------------------------------


def test_lead_bound_state_cases():
    p = lead_bound_state(1.0)
    assert p.lam == pytest.approx(-1.0) and p.tag is SpectralTag.LEAD_BOUND
    assert lead_bound_state(-1.0) is None
    assert lead_bound_state(0.0) is None
    assert lead_bound_state(2.0).lam == pytest.approx(-0.25)


def test_hybrid_decoupled_matches_parts():
    th = CouplingMatrix(alpha=-2.0, gamma=1.0, eps=0.0)
    pts = hybrid_discrete_spectrum(HALF, th)
    lams = sorted(p.lam for p in pts)
    assert len(lams) == 2
    assert lams[1] == pytest.approx(-1.0, rel=1e-10)  # lead
    assert lams[0] == pytest.approx(coth_root(-2.0), rel=1e-9)  # wedge
    assert all(p.tag is SpectralTag.HYBRID_BOUND for p in pts)


def test_hybrid_empty_when_no_branch_binds():
    th = CouplingMatrix(alpha=0.0, gamma=-1.0, eps=0.0)
    assert hybrid_discrete_spectrum(HALF, th) == []


def test_hybrid_small_eps_perturbs_continuously():
    th0 = CouplingMatrix(alpha=-2.0, gamma=1.0, eps=0.0)
    base = sorted(p.lam for p in hybrid_discrete_spectrum(HALF, th0))
    eps = 0.05
    th = CouplingMatrix(alpha=-2.0, gamma=1.0, eps=eps)
    moved = sorted(p.lam for p in hybrid_discrete_spectrum(HALF, th))
    assert len(moved) == len(base)
    for a, b in zip(base, moved):
        assert abs(a - b) < 10.0 * eps**2 + 1e-8


def test_hybrid_residuals_small():
    th = CouplingMatrix(alpha=-2.5, gamma=2.0, eps=0.3)
    for p in hybrid_discrete_spectrum(WedgeGeometry(0.7), th):
        assert p.residual < 1e-9


def test_hybrid_shallow_state_found():
    # gamma large -> lead state at -1/gamma^2 close to 0
    th = CouplingMatrix(alpha=0.0, gamma=30.0, eps=0.0)
    pts = hybrid_discrete_spectrum(HALF, th)
    assert any(p.lam == pytest.approx(-1.0 / 900.0, rel=1e-8) for p in pts)


# --- report ------------------------------------------------------------------


def test_classify_spectrum_structure():
    th = CouplingMatrix(alpha=-2.0, gamma=1.0, eps=0.1)
    rep = classify_spectrum(HALF, th, e_max=100.0)
    assert rep.essential == (0.0, math.inf)
    assert rep.absolutely_continuous == (0.0, math.inf)
    assert all(p.lam < 0 for p in rep.discrete)
    point_set = {(p.lam, p.tag) for p in rep.point}
    assert point_set == {(p.lam, p.tag) for p in rep.discrete} | {
        (p.lam, p.tag) for p in rep.embedded
    }
    assert rep.zero_is_eigenvalue is False
    assert rep.continuous_excluded == [p.lam for p in rep.embedded]


def test_classify_decoupled_matches_description():
    th = CouplingMatrix(alpha=-2.0, gamma=1.0, eps=0.0)
    rep = classify_spectrum(HALF, th, e_max=100.0)
    expect = sorted([-1.0, coth_root(-2.0)])
    assert [p.lam for p in rep.discrete] == pytest.approx(expect, rel=1e-9)
    # embedded Friedrichs points are in point but not in discrete
    emb = [p for p in rep.point if p.tag is SpectralTag.FRIEDRICHS_EMBEDDED]
    assert emb and all(p.lam > 0 for p in emb)


def test_bad_inputs():
    with pytest.raises(DomainError):
        hybrid_discrete_spectrum(HALF, CouplingMatrix(0.0, 1.0, 0.0), lambda_min=1.0)
    with pytest.raises(DomainError):
        wedge_eigenfunction(HALF, 0, 1, 0.5, 0.5)
    with pytest.raises(DomainError):
        gap_root(HALF, 0.0, 0)


def test_sigma_alpha_at_window_edge_does_not_raise():
    # the probe of the first pole beyond e_max may itself sit outside the
    # trusted window; the enumeration must stop cleanly, not crash
    g = WedgeGeometry(0.64)
    sa = nonfriedrichs_spectrum(g, 0.0, 350.0)
    assert len(sa.plus) >= 5
    for p in sa.plus:
        assert p.lam <= 350.0
