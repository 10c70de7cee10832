"""Built-in oracle suite: fast closed-form checks of a fresh build.

Each check compares an engine value against an independent closed form or
identity and reports its worst residual.  The suite is deterministic
(fixed RNG seed) and runs in a few seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qkrein import q_wedge, wedge_poles
from .scattering import reflection
from .specfun import bessel_zero, gamma_ratio
from .spectra import gap_root, nonfriedrichs_spectrum, singleton_root
from .types import CouplingMatrix, WedgeGeometry

__all__ = ["CheckResult", "SelftestReport", "run_selftest"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    tol: float
    detail: str


@dataclass(frozen=True)
class SelftestReport:
    results: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def _check(name, residual, tol, detail=""):
    return CheckResult(
        name=name, passed=bool(residual <= tol), residual=float(residual), tol=tol, detail=detail
    )


def _q_half_positive() -> CheckResult:
    g = WedgeGeometry(0.5)
    poles = wedge_poles(g, 300.0)
    lam = np.linspace(0.5, 299.5, 200)
    keep = np.ones_like(lam, dtype=bool)
    for p in poles:
        keep &= np.abs(lam - p) > 1e-3
    lam = lam[keep]
    got = np.real(q_wedge(g, lam))
    s = np.sqrt(lam)
    ref = -s * np.cos(s) / np.sin(s)
    resid = float(np.max(np.abs(got - ref) / np.abs(ref)))
    return _check("q_half_cot_positive_axis", resid, 1e-10, f"{lam.size} points on (0, 300)")


def _q_half_negative() -> CheckResult:
    g = WedgeGeometry(0.5)
    lam = np.linspace(-299.5, -0.5, 150)
    got = np.real(q_wedge(g, lam))
    s = np.sqrt(-lam)
    ref = -s / np.tanh(s)
    resid = float(np.max(np.abs(got - ref) / np.abs(ref)))
    return _check("q_half_coth_negative_axis", resid, 1e-10, f"{lam.size} points on (-300, 0)")


def _q_zero_normalization() -> CheckResult:
    betas = np.arange(0.5, 0.96, 0.05)
    resid = max(abs(float(np.real(q_wedge(WedgeGeometry(float(b)), 0.0))) + 1.0) for b in betas)
    return _check("q_at_zero_is_minus_one", resid, 1e-12, f"{len(betas)} openings")


def _sigma_plus_half() -> CheckResult:
    g = WedgeGeometry(0.5)
    sa = nonfriedrichs_spectrum(g, 0.0, 300.0)
    expect = [(math.pi * (k - 0.5)) ** 2 for k in range(1, 6)]
    resid = max(abs(p.lam - e) / e for p, e in zip(sa.plus, expect))
    return _check("sigma_plus_alpha0_half_opening", resid, 1e-10, "first 5 levels")


def _sigma_plus_general() -> CheckResult:
    g = WedgeGeometry(0.75)
    sa = nonfriedrichs_spectrum(g, 0.0, 300.0)
    resid = 0.0
    for k, p in enumerate(sa.plus, start=1):
        e = bessel_zero(-0.75, k) ** 2
        resid = max(resid, abs(p.lam - e) / e)
    return _check("sigma_plus_alpha0_bessel_zeros", resid, 1e-8, f"{len(sa.plus)} levels, opening 0.75")


def _interlacing() -> CheckResult:
    worst = 0.0
    ok = True
    for beta in (0.5, 0.7, 0.9):
        g = WedgeGeometry(beta)
        for alpha in (-3.0, -1.0, 0.0, 2.0):
            base = singleton_root(g, alpha)
            first = bessel_zero(beta, 1) ** 2
            ok &= base < first
            ok &= (base < 0) == (alpha < -1.0)
            ok &= (base == 0.0) == (alpha == -1.0)
            for m in (1, 2, 3, 4):
                lo = bessel_zero(beta, m) ** 2
                hi = bessel_zero(beta, m + 1) ** 2
                root = gap_root(g, alpha, m)
                ok &= lo < root < hi
                worst = max(worst, abs(float(np.real(q_wedge(g, root))) - alpha))
    return _check("interlacing_and_singleton", worst if ok else math.inf, 1e-9,
                  "3 openings x 4 couplings, gaps 1..4")


def _unitarity(samples: int = 1000) -> CheckResult:
    rng = np.random.default_rng(12345)
    worst = 0.0
    for _ in range(samples):
        g = WedgeGeometry(rng.uniform(0.5, 0.95))
        th = CouplingMatrix(
            alpha=rng.uniform(-5, 5), gamma=rng.uniform(-3, 3), eps=rng.uniform(0, 2)
        )
        k = rng.uniform(0.05, 12.0)
        worst = max(worst, abs(abs(reflection(g, th, k)) - 1.0))
    return _check("reflection_unitarity", worst, 1e-12, f"{samples} random samples")


def _gamma_reflection() -> CheckResult:
    worst = 0.0
    for beta in np.linspace(0.5, 0.99, 50):
        direct = math.gamma(-beta) / math.gamma(beta)
        worst = max(worst, abs(gamma_ratio(float(beta)) - direct) / abs(direct))
    return _check("gamma_ratio_reflection_identity", worst, 1e-13, "50-point grid")


def run_selftest() -> SelftestReport:
    checks = [
        _q_half_positive(),
        _q_half_negative(),
        _q_zero_normalization(),
        _sigma_plus_half(),
        _sigma_plus_general(),
        _interlacing(),
        _unitarity(),
        _gamma_reflection(),
    ]
    return SelftestReport(results=checks)
