"""Scattering matrix and reflection amplitude tests.

Closed-form oracles: the pure point-interaction phase at eps = 0, total
reflection -1 for the Neumann-free endpoint, transparency at the parent
levels, and the Breit-Wigner phase climb across a narrow resonance
compared against the resonance module's pole location.
"""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wedgehybrid.errors import DomainError
from wedgehybrid.resonance import resonance_at
from wedgehybrid.scattering import phase_scan, reflection, s_matrix
from wedgehybrid.specfun import bessel_zero
from wedgehybrid.spectra import gap_root
from wedgehybrid.types import CouplingMatrix, WedgeGeometry

HALF = WedgeGeometry(0.5)


def test_point_interaction_phase_eps_zero():
    th = CouplingMatrix(alpha=0.0, gamma=1.0, eps=0.0)
    assert reflection(HALF, th, 1.0) == pytest.approx((1 + 1j) / (1 - 1j), rel=1e-13)
    lam = 2.3
    s = s_matrix(HALF, th, lam)
    ik = 1j / math.sqrt(lam)
    assert s[0, 0] == pytest.approx((1 + ik) / (1 - ik), rel=1e-13)


def test_total_reflection_neumann_gamma_zero():
    th = CouplingMatrix(alpha=0.0, gamma=0.0, eps=0.0)
    assert s_matrix(HALF, th, 2.0)[0, 0] == pytest.approx(-1.0, rel=1e-13)


def test_s22_exactly_one():
    th = CouplingMatrix(alpha=1.0, gamma=0.5, eps=0.7)
    s = s_matrix(HALF, th, 3.0)
    assert s[1, 1] == 1.0
    assert s[0, 1] == 0.0 and s[1, 0] == 0.0


def test_transparency_at_parent_level():
    g = WedgeGeometry(0.7)
    th = CouplingMatrix(alpha=1.5, gamma=0.8, eps=0.4)
    lam = gap_root(g, 1.5, 1)
    assert s_matrix(g, th, lam)[0, 0] == pytest.approx(1.0, abs=1e-12)


def test_limit_value_at_wedge_pole():
    g = WedgeGeometry(0.7)
    th = CouplingMatrix(alpha=1.5, gamma=0.8, eps=0.4)
    pole = bessel_zero(0.7, 1) ** 2
    s = s_matrix(g, th, pole)[0, 0]
    k = math.sqrt(pole)
    assert s == pytest.approx((0.8 + 1j / k) / (0.8 - 1j / k), rel=1e-10)


def test_domain_errors():
    th = CouplingMatrix(alpha=0.0, gamma=1.0, eps=0.0)
    with pytest.raises(DomainError):
        s_matrix(HALF, th, -1.0)
    with pytest.raises(DomainError):
        reflection(HALF, th, 0.0)
    with pytest.raises(DomainError):
        phase_scan(HALF, th, [1.0, 0.5])


def test_reflection_matches_s_matrix_everywhere():
    rng = np.random.default_rng(5)
    for _ in range(200):
        g = WedgeGeometry(rng.uniform(0.5, 0.95))
        th = CouplingMatrix(
            alpha=rng.uniform(-5, 5), gamma=rng.uniform(-3, 3), eps=rng.uniform(0, 2)
        )
        k = rng.uniform(0.05, 12.0)
        assert abs(reflection(g, th, k) - s_matrix(g, th, k * k)[0, 0]) < 1e-13


@settings(max_examples=40, deadline=None)
@given(
    beta=st.floats(min_value=0.5, max_value=0.95),
    alpha=st.floats(min_value=-5.0, max_value=5.0),
    gamma=st.floats(min_value=-3.0, max_value=3.0),
    eps=st.floats(min_value=0.0, max_value=2.0),
    k=st.floats(min_value=0.05, max_value=12.0),
)
def test_unitarity_property(beta, alpha, gamma, eps, k):
    g = WedgeGeometry(beta)
    th = CouplingMatrix(alpha=alpha, gamma=gamma, eps=eps)
    assert abs(abs(reflection(g, th, k)) - 1.0) < 1e-12


def test_decoupling_limit_is_quadratic_in_eps():
    g = WedgeGeometry(0.8)
    k = 1.7
    base = reflection(g, CouplingMatrix(alpha=0.4, gamma=1.2, eps=0.0), k)
    errs = []
    for eps in (0.2, 0.1, 0.05):
        r = reflection(g, CouplingMatrix(alpha=0.4, gamma=1.2, eps=eps), k)
        errs.append(abs(r - base))
    assert 2.5 <= errs[0] / errs[1] <= 6.0  # ~4 per halving
    assert 2.5 <= errs[1] / errs[2] <= 6.0


def test_phase_scan_contracts():
    # dk <= 1e-3, window ending ~70 resonance widths below the gap-1 pole
    g = WedgeGeometry(0.75)
    th = CouplingMatrix(alpha=0.0, gamma=1.0, eps=0.3)
    ks = np.arange(0.2, 4.2, 1e-3)
    recs = phase_scan(g, th, ks)
    assert len(recs) == ks.size
    for r in recs[:: len(recs) // 50]:
        assert r.refl == r.s11
        assert r.s22 == 1.0
        assert -math.pi < r.phase <= math.pi
    unwrapped = np.array([r.phase_unwrapped for r in recs])
    assert np.max(np.abs(np.diff(unwrapped))) < np.pi / 2


def test_phase_scan_eps_zero_equals_point_interaction_phase():
    g = WedgeGeometry(0.75)
    th = CouplingMatrix(alpha=0.3, gamma=1.0, eps=0.0)
    ks = np.linspace(0.5, 2.0, 7)
    recs = phase_scan(g, th, ks)
    for r in recs:
        pure = (1.0 + 1j / r.k) / (1.0 - 1j / r.k)
        assert r.s11 == pytest.approx(pure, rel=1e-12)


def test_phase_climbs_by_two_pi_across_narrow_resonance():
    # Breit-Wigner: phase of R increases by ~2 pi across a window of a few
    # widths around the resonance for weak coupling
    g = WedgeGeometry(0.75)
    alpha, gamma, eps = 0.0, 1.0, 0.05
    th = CouplingMatrix(alpha=alpha, gamma=gamma, eps=eps)
    r = resonance_at(g, alpha, gamma, eps, 1)
    k0 = math.sqrt(r.z.real)
    width_k = abs(r.z.imag) / (2.0 * k0)
    ks = np.linspace(k0 - 60 * width_k, k0 + 60 * width_k, 4001)
    recs = phase_scan(g, th, ks)
    unwrapped = np.array([rr.phase_unwrapped for rr in recs])
    climb = unwrapped[-1] - unwrapped[0]
    assert climb == pytest.approx(2.0 * math.pi, rel=0.1)


def test_phase_scan_flags_pole_points():
    g = WedgeGeometry(0.7)
    th = CouplingMatrix(alpha=1.5, gamma=0.8, eps=0.4)
    k_pole = bessel_zero(0.7, 1)
    recs = phase_scan(g, th, [k_pole - 0.1, k_pole, k_pole + 0.1])
    assert [r.flagged for r in recs] == [False, True, False]
    # the limit value keeps the phase continuous through the pole
    assert abs(recs[1].phase_unwrapped - recs[0].phase_unwrapped) < 0.5
