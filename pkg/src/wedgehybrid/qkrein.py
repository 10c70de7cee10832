"""Kreĭn Q-functions of the wedge, the lead and the hybrid.

The wedge Q-function is the ratio of regularized Bessel series

    Q_W(z) = - B_{-beta}(z) / B_beta(z),

real-analytic on the real axis away from its simple poles at the squared
zeros of J_beta, strictly increasing between consecutive poles, with
Q_W(0) = -1.  The lead Q-function is i/sqrt(z) on the cut plane with the
Im-positive determination of the root.  Also here: the vertex profiles
(the harmonic deficiency function with r^(-beta) singularity and its
Helmholtz counterpart), the renormalized vertex trace, and the squared
deficiency norm that doubles as dQ_W/dz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, DomainError, PoleError
from .quadrature import DEFAULT_QUADRATURE, QuadratureControl, _apply, wedge_quadrature
from .specfun import (
    DEFAULT_CONTROL,
    SeriesControl,
    bessel_series,
    bessel_series_m1,
    bessel_zero,
)
from .types import WedgeGeometry

__all__ = [
    "sqrt_upper",
    "q_wedge",
    "q_wedge_deriv",
    "q_lead",
    "q_hybrid",
    "vertex_profile",
    "deficiency_at_zero",
    "deficiency",
    "deficiency_diff",
    "vertex_trace",
    "TraceResult",
    "deficiency_norm_sq",
    "deficiency_norm_sq_quadrature",
    "wedge_poles",
]

# Below this magnitude of B_beta(z) the point counts as sitting on a pole.
POLE_GUARD = 1e-13


def sqrt_upper(z):
    """Square root with Im >= 0: the determination cut along [0, +inf).

    Boundary values on the positive axis are taken from the upper rim
    (positive real root); on the negative axis the value is i*sqrt(|z|).
    """
    arr = np.asarray(z, dtype=complex)
    w = np.sqrt(np.where(arr.imag == 0.0, arr.real + 0.0j, arr))
    w = np.where(w.imag < 0.0, -w, w)
    return w[()] if arr.ndim == 0 else w


def wedge_poles(geom: WedgeGeometry, e_max: float, ctl: SeriesControl = DEFAULT_CONTROL):
    """Poles of Q_W below e_max: squared zeros of J_beta, ascending."""
    out = []
    m = 1
    while m * math.pi + geom.beta <= math.sqrt(ctl.domain_radius):
        lam2 = bessel_zero(geom.beta, m, ctl) ** 2
        if lam2 > e_max:
            break
        out.append(lam2)
        m += 1
    return out


def _nearest_pole(geom: WedgeGeometry, z, ctl: SeriesControl) -> float | None:
    try:
        poles = wedge_poles(geom, ctl.domain_radius, ctl)
    except Exception:
        return None
    if not poles:
        return None
    zr = float(np.real(np.asarray(z)).ravel()[0])
    return min(poles, key=lambda p: abs(p - zr))


def _wedge_ratio(geom: WedgeGeometry, z, ctl: SeriesControl):
    """B_{-beta}(z)/B_beta(z) with the pole guard on the denominator."""
    num = bessel_series(-geom.beta, z, ctl)
    den = bessel_series(geom.beta, z, ctl)
    den_abs = np.atleast_1d(np.abs(den))
    if np.any(den_abs < POLE_GUARD):
        zb = complex(np.atleast_1d(np.asarray(z))[int(np.argmin(den_abs))])
        raise PoleError(
            f"z={zb!r} sits on a wedge eigenvalue (pole of the Q-function)",
            nearest=_nearest_pole(geom, zb, ctl),
        )
    return num, den


def q_wedge(geom: WedgeGeometry, z, ctl: SeriesControl = DEFAULT_CONTROL):
    """Wedge Q-function -B_{-beta}(z)/B_beta(z); scalar or array z."""
    num, den = _wedge_ratio(geom, z, ctl)
    return -num / den


def q_wedge_deriv(geom: WedgeGeometry, z, ctl: SeriesControl = DEFAULT_CONTROL):
    """Analytic dQ_W/dz from the term-wise derivative B_nu' = -B_{nu+1}/(4(nu+1)).

    On the real axis between poles this equals the squared L2 norm of the
    Helmholtz deficiency function, hence is strictly positive.
    """
    b = geom.beta
    num, den = _wedge_ratio(geom, z, ctl)
    up = bessel_series(1.0 - b, z, ctl)
    dn = bessel_series(1.0 + b, z, ctl)
    return (up * den / (4.0 * (1.0 - b)) - num * dn / (4.0 * (1.0 + b))) / (den * den)


def q_lead(z):
    """Lead Q-function i/sqrt(z), Im-positive determination; z != 0."""
    arr = np.asarray(z)
    if np.any(arr == 0.0):
        raise DomainError("lead Q-function is singular at z = 0")
    return 1j / sqrt_upper(z)


def q_hybrid(geom: WedgeGeometry, z, ctl: SeriesControl = DEFAULT_CONTROL) -> np.ndarray:
    """Diagonal hybrid Q-matrix diag(Q_L, Q_W + 1) at scalar z."""
    ql = complex(q_lead(z))
    qw = complex(q_wedge(geom, z, ctl))
    return np.array([[ql, 0.0], [0.0, qw + 1.0]], dtype=complex)


# ---------------------------------------------------------------------------
# Vertex profiles


def vertex_profile(geom: WedgeGeometry, r, theta):
    """Regular vertex profile r^beta sin(beta theta) / sqrt(pi)."""
    b = geom.beta
    return np.asarray(r) ** b * np.sin(b * np.asarray(theta)) / math.sqrt(math.pi)


def deficiency_at_zero(geom: WedgeGeometry, r, theta):
    """Harmonic deficiency function (r^beta - r^-beta) sin(beta theta)/sqrt(pi).

    Vanishes on the boundary away from the vertex and diverges like
    -r^-beta sin(beta theta)/sqrt(pi) at the vertex.
    """
    b = geom.beta
    rr = np.asarray(r, dtype=float)
    return (rr**b - rr ** (-b)) * np.sin(b * np.asarray(theta)) / math.sqrt(math.pi)


def deficiency(geom: WedgeGeometry, z, r, theta, ctl: SeriesControl = DEFAULT_CONTROL):
    """Helmholtz deficiency function at spectral parameter z.

    Normalized so the z -> 0 limit is exactly ``deficiency_at_zero``;
    vanishes on the boundary away from the vertex for every admissible z.
    """
    b = geom.beta
    num, den = _wedge_ratio(geom, z, ctl)
    rr = np.asarray(r, dtype=float)
    zr2 = z * rr * rr
    val = (num / den) * bessel_series(b, zr2, ctl) * rr**b - bessel_series(-b, zr2, ctl) * rr ** (-b)
    return val * np.sin(b * np.asarray(theta)) / math.sqrt(math.pi)


def deficiency_diff(geom: WedgeGeometry, z, r, theta, ctl: SeriesControl = DEFAULT_CONTROL):
    """Difference (harmonic - Helmholtz) deficiency functions, stably.

    The r^-beta singularities cancel analytically; summing the series
    without its unit leading term keeps that cancellation exact near the
    vertex, where the renormalized trace needs it.
    """
    b = geom.beta
    num, den = _wedge_ratio(geom, z, ctl)
    ratio = num / den
    rr = np.asarray(r, dtype=float)
    zr2 = z * rr * rr
    regular = (1.0 - ratio) - ratio * bessel_series_m1(b, zr2, ctl)
    singular = bessel_series_m1(-b, zr2, ctl)
    val = regular * rr**b + singular * rr ** (-b)
    return val * np.sin(b * np.asarray(theta)) / math.sqrt(math.pi)


# ---------------------------------------------------------------------------
# Renormalized vertex trace


@dataclass(frozen=True)
class TraceResult:
    value: float
    estimate: float


def _richardson_halving(values, exponents):
    """Eliminate error terms c*r^p sequentially for r halving per level."""
    col = list(values)
    last_entries = [col[-1]]
    for p in exponents:
        if len(col) < 2:
            break
        q = 2.0 ** (-p)
        col = [(col[i] - q * col[i - 1]) / (1.0 - q) for i in range(1, len(col))]
        last_entries.append(col[-1])
    estimate = abs(last_entries[-1] - last_entries[-2]) if len(last_entries) > 1 else math.inf
    if len(col) > 1:
        estimate = max(estimate, abs(col[-1] - col[-2]))
    return col[-1], estimate


def vertex_trace(
    f,
    geom: WedgeGeometry,
    *,
    j_min: int = 3,
    j_max: int = 12,
    tol: float = 1e-5,
    quad: QuadratureControl = DEFAULT_QUADRATURE,
) -> TraceResult:
    """Renormalized evaluation at the vertex.

    Computes (sqrt(pi) beta (beta+2) / 2) * lim_{r->0} r^-beta
    Integral_W f(r*x) dx by scaled-wedge quadrature at radii 2^-j and
    Richardson extrapolation in the known error exponents; the leading
    correction is O(r^(2-2*beta)), followed by the analytic O(r^2) tail.
    ``f(r, theta)`` must broadcast over numpy arrays.
    """
    b = geom.beta
    pref = 0.5 * math.sqrt(math.pi) * b * (b + 2.0)
    vals = []
    for j in range(j_min, j_max + 1):
        rj = 2.0**-j
        integral = _apply(lambda rr, tt: f(rj * rr, tt), geom, quad)
        vals.append(float(np.real(integral)) * rj ** (-b))
    value, estimate = _richardson_halving(vals, [2.0 - 2.0 * b, 2.0, 4.0 - 2.0 * b])
    value *= pref
    estimate *= pref
    if estimate > tol:
        raise AccuracyError(
            f"vertex trace extrapolation estimate {estimate:.3e} above {tol:.3e}",
            estimate=estimate,
        )
    return TraceResult(value=value, estimate=estimate)


# ---------------------------------------------------------------------------
# Deficiency norm


def deficiency_norm_sq(geom: WedgeGeometry, lam: float, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Squared L2 norm of the Helmholtz deficiency function at real lam.

    Primary route: the analytic derivative of the wedge Q-function.
    """
    val = q_wedge_deriv(geom, float(lam), ctl)
    return float(np.real(val))


def deficiency_norm_sq_quadrature(
    geom: WedgeGeometry,
    lam: float,
    quad: QuadratureControl = DEFAULT_QUADRATURE,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> float:
    """Independent cross-check of ``deficiency_norm_sq`` by wedge quadrature."""
    lam = float(lam)

    def f(r, t):
        g = deficiency(geom, lam, r, t, ctl)
        return g * g

    return float(np.real(wedge_quadrature(f, geom, quad).value))
