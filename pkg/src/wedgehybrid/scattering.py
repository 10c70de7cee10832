"""On-shell scattering matrix and reflection amplitude of the lead channel.

The wedge is compact, so the half-line carries the single open channel and
the scattering matrix is diag(s, 1) with the unimodular entry

    s(lam) = [(gamma + i/sqrt(lam)) (alpha - Q_W(lam)) - eps^2]
           / [(gamma - i/sqrt(lam)) (alpha - Q_W(lam)) - eps^2].

Numerator and denominator are complex conjugates for real data, so |s| = 1
identically.  Both are evaluated here in a pole-cleared form (multiplied
through by the series denominator of Q_W), which extends s analytically
across the wedge eigenvalues where Q_W blows up: there the entry reduces
to the bare point-interaction phase (gamma + i/sqrt)/(gamma - i/sqrt).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .qkrein import POLE_GUARD
from .specfun import DEFAULT_CONTROL, SeriesControl, bessel_j, bessel_series, gamma_ratio
from .types import CouplingMatrix, WedgeGeometry

__all__ = ["ScatteringRecord", "s_matrix", "reflection", "phase_scan"]


@dataclass(frozen=True)
class ScatteringRecord:
    lam: float
    k: float
    s11: complex
    s22: complex
    refl: complex
    phase: float
    phase_unwrapped: float | None = None
    flagged: bool = False


def _s11_cleared(geom: WedgeGeometry, theta: CouplingMatrix, lam, ctl: SeriesControl):
    """Pole-cleared scattering entry; lam is a positive array."""
    bp = bessel_series(geom.beta, lam, ctl)
    bm = bessel_series(-geom.beta, lam, ctl)
    # (alpha - Q_W) * B_beta, with Q_W = -B_{-beta}/B_beta
    wedge = theta.alpha * bp + bm
    ik = 1j / np.sqrt(lam)
    num = (theta.gamma + ik) * wedge - theta.eps**2 * bp
    den = (theta.gamma - ik) * wedge - theta.eps**2 * bp
    return num / den, bp


def s_matrix(
    geom: WedgeGeometry,
    theta: CouplingMatrix,
    lam: float,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> np.ndarray:
    """2x2 on-shell scattering matrix diag(s11, 1) at energy lam > 0.

    At wedge eigenvalues the analytic limit value is returned (the cleared
    form needs no special casing there).
    """
    lam = float(lam)
    if not (lam > 0.0) or not math.isfinite(lam):
        raise DomainError(f"scattering energy must be positive, got {lam}")
    s11, _ = _s11_cleared(geom, theta, np.asarray([lam]), ctl)
    return np.array([[complex(s11[0]), 0.0], [0.0, 1.0]], dtype=complex)


def reflection(
    geom: WedgeGeometry,
    theta: CouplingMatrix,
    k: float,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> complex:
    """Reflection amplitude of the lead channel at momentum k > 0.

    Independent route through the classical Bessel functions and the gamma
    ratio: Q_W(k^2) = (Gamma(-b)/Gamma(b)) (k/2)^(2b) J_{-b}(k)/J_b(k),
    again cleared of the J_b zeros.  Must agree with s_matrix(k^2)[0,0] to
    near machine precision.
    """
    k = float(k)
    if not (k > 0.0) or not math.isfinite(k):
        raise DomainError(f"momentum must be positive, got {k}")
    b = geom.beta
    c = gamma_ratio(b) * (k / 2.0) ** (2.0 * b)
    jp = float(bessel_j(b, k, ctl))
    jm = float(bessel_j(-b, k, ctl))
    wedge = theta.alpha * jp - c * jm  # (alpha - Q_W) * J_beta
    ik = 1j / k
    num = (theta.gamma + ik) * wedge - theta.eps**2 * jp
    den = (theta.gamma - ik) * wedge - theta.eps**2 * jp
    return complex(num / den)


def phase_scan(
    geom: WedgeGeometry,
    theta: CouplingMatrix,
    k_grid,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> list[ScatteringRecord]:
    """Scattering records along an ascending momentum grid.

    The phase is the principal argument in (-pi, pi]; ``phase_unwrapped``
    removes the 2*pi jumps by nearest-branch continuation.  Grid points
    sitting on a wedge eigenvalue are flagged; their value is the analytic
    limit of the cleared form, so the unwrapped phase stays continuous
    through them.
    """
    ks = np.asarray([float(k) for k in k_grid], dtype=float)
    if ks.size == 0:
        return []
    if np.any(ks <= 0.0):
        raise DomainError("momentum grid must be positive")
    if np.any(np.diff(ks) <= 0.0):
        raise DomainError("momentum grid must be strictly increasing")
    lam = ks * ks
    s11, bp = _s11_cleared(geom, theta, lam, ctl)
    flagged = np.abs(bp) < POLE_GUARD
    phase = np.angle(s11)
    unwrapped = np.unwrap(phase)
    out = []
    for i in range(ks.size):
        out.append(
            ScatteringRecord(
                lam=float(lam[i]),
                k=float(ks[i]),
                s11=complex(s11[i]),
                s22=1.0 + 0.0j,
                refl=complex(s11[i]),
                phase=float(phase[i]),
                phase_unwrapped=float(unwrapped[i]),
                flagged=bool(flagged[i]),
            )
        )
    return out
