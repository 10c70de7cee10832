"""Fractional-order Bessel kernel built on one entire series.

Everything in this package reduces to the regularized Bessel series in the
squared argument,

    B_nu(z) = 1 + sum_{k>=1} (-1)^k / (k! * (nu+1)(nu+2)...(nu+k)) * (z/4)^k,

an entire function of z (hypergeometric 0F1(; nu+1; -z/4)).  The classical
functions are recovered as

    J_nu(w) = (w/2)^nu * B_nu(w^2)  / Gamma(1+nu),
    I_nu(x) = (x/2)^nu * B_nu(-x^2) / Gamma(1+nu),

so only B_nu is ever summed.  Working in z = w^2 keeps the series free of
branch cuts; the only fractional power is the (w/2)^nu prefactor.

Accuracy model.  The series is evaluated in float64 with a term recurrence
(the generalized factorial grows by a running product, never by gamma
quotients).  For z on the positive axis the sum cancels: the largest term
is roughly exp(sqrt(z))/(pi*sqrt(z)) while the sum is O(1), so float64
loses about sqrt(z)/ln(10) digits.  Whenever the cancellation would push
the estimated relative error above ``_HP_TRIGGER_REL`` the affected entries
are recomputed with mpmath at adaptive precision.  That keeps q-function
evaluations accurate to ~1e-12 relative across the whole trusted window
|z| <= 400 including the immediate neighbourhood of Bessel zeros, where
relative accuracy of a nearly-cancelled sum is exactly what pole-adjacent
Q values and Newton polishing of zeros require.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import AccuracyError, ConvergenceError, DomainError, RangeError

__all__ = [
    "SeriesControl",
    "DEFAULT_CONTROL",
    "bessel_series",
    "bessel_series_m1",
    "bessel_series_deriv",
    "bessel_j",
    "bessel_i",
    "bessel_zero",
    "gamma_ratio",
]

# Estimated float64 rounding floor of the summed series, as a multiple of the
# largest term.  Measured worst case over the window is ~1 ulp (consecutive
# terms share their accumulated recurrence factors, so little error survives
# the cancellation); 8 ulp keeps an 8x safety margin.
_FLOAT_FLOOR = 8 * 2.2e-16
# Pole-proximity style guard against dividing by a fully cancelled sum.
_TINY = 1e-300

_MP_LOCK = threading.Lock()


@dataclass(frozen=True)
class SeriesControl:
    """Convergence controls for the series engine.

    rel_tol       terminate when |term| <= rel_tol * |partial sum|
    max_terms     hard cap on the number of summed terms
    domain_radius trusted window for the squared argument z
    hp_target     relative accuracy that triggers the high-precision
                  rescue of cancelled sums; loosen for bulk evaluations
                  (quadratures, mode sums) that tolerate ~1e-8
    """

    rel_tol: float = 1e-15
    max_terms: int = 200
    domain_radius: float = 400.0
    hp_target: float = 1e-11

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1.0):
            raise DomainError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if self.max_terms < 10:
            raise DomainError(f"max_terms must be >= 10, got {self.max_terms}")
        if self.domain_radius <= 0:
            raise DomainError("domain_radius must be positive")
        if not (0.0 < self.hp_target < 1.0):
            raise DomainError(f"hp_target must lie in (0, 1), got {self.hp_target}")


DEFAULT_CONTROL = SeriesControl()


def _require_order(nu: float) -> float:
    nu = float(nu)
    if not math.isfinite(nu) or nu <= -1.0:
        raise DomainError(f"Bessel order must be > -1, got {nu}")
    return nu


def _check_window(z: np.ndarray, ctl: SeriesControl):
    zmax = float(np.max(np.abs(z))) if z.size else 0.0
    if zmax > ctl.domain_radius:
        raise RangeError(
            f"|z| = {zmax:.6g} exceeds the trusted series radius {ctl.domain_radius:.6g}"
        )


def _series_float(nu: float, z: np.ndarray, ctl: SeriesControl, keep_leading: bool):
    """Vectorized float64 summation.  Returns (sum, max|term|, converged)."""
    term = np.ones_like(z)
    total = term.copy() if keep_leading else np.zeros_like(z)
    tmax = np.ones(z.shape)
    converged = np.zeros(z.shape, dtype=bool)
    for k in range(1, ctl.max_terms + 1):
        term = term * (-z) / (4.0 * k * (k + nu))
        total = total + term
        at = np.abs(term)
        np.maximum(tmax, at, out=tmax)
        converged |= at <= ctl.rel_tol * (np.abs(total) + _TINY)
        if converged.all():
            break
    return total, tmax, converged


def _series_mp(nu: float, z: complex, ctl: SeriesControl, dps: int, keep_leading: bool):
    """Scalar mpmath summation at ``dps`` digits (serialized: mp context is global)."""
    with _MP_LOCK, mpmath.workdps(dps):
        zz = mpmath.mpc(z) if z.imag != 0.0 else mpmath.mpf(z.real)
        nu_mp = mpmath.mpf(nu)
        term = mpmath.mpf(1)
        total = mpmath.mpf(1) if keep_leading else mpmath.mpf(0)
        tmax = mpmath.mpf(1)
        tol = mpmath.mpf(10) ** (-(dps + 5))
        for k in range(1, ctl.max_terms + 1):
            term = term * (-zz) / (4 * k * (k + nu_mp))
            total = total + term
            at = abs(term)
            if at > tmax:
                tmax = at
            if at <= tol * tmax:
                return complex(total), float(tmax)
        raise ConvergenceError(
            f"series did not converge within {ctl.max_terms} terms at z={z!r}"
        )


def _series(nu: float, z, ctl: SeriesControl, keep_leading: bool):
    """Shared driver: float64 pass, then high-precision rescue where needed."""
    nu = _require_order(nu)
    arr = np.asarray(z)
    scalar = arr.ndim == 0
    if np.iscomplexobj(arr):
        work = arr.astype(complex).ravel()
    else:
        work = arr.astype(float).ravel()
    _check_window(work, ctl)

    total, tmax, conv = _series_float(nu, work, ctl, keep_leading)
    if not conv.all():
        bad = work[~conv][0]
        raise ConvergenceError(
            f"series did not converge within {ctl.max_terms} terms at z={bad!r}"
        )

    # Rescue entries whose cancellation ate too many digits.
    err = tmax * _FLOAT_FLOOR
    need = err > ctl.hp_target * (np.abs(total) + _TINY)
    if need.any():
        out = total.astype(complex)
        for i in np.nonzero(need)[0]:
            zi = complex(work[i])
            ratio = max(float(np.abs(total[i])), _TINY) / float(tmax[i])
            dps = int(18 + max(0.0, -math.log10(max(ratio, 1e-60))) + 12)
            val, tm = _series_mp(nu, zi, ctl, dps, keep_leading)
            if abs(val) < tm * 10.0 ** (-(dps - 18)):
                val, _ = _series_mp(nu, zi, ctl, 2 * dps, keep_leading)
            out[i] = val
        total = out

    if not np.iscomplexobj(arr):
        total = np.real(total)
    result = total.reshape(arr.shape)
    return result[()] if scalar else result


def bessel_series(nu: float, z, ctl: SeriesControl = DEFAULT_CONTROL):
    """Regularized Bessel series B_nu(z) in the squared argument.

    Accepts scalar or ndarray ``z`` (real or complex), returns a matching
    value.  Raises RangeError outside |z| <= ctl.domain_radius and
    ConvergenceError if max_terms is exhausted.
    """
    return _series(nu, z, ctl, keep_leading=True)


def bessel_series_m1(nu: float, z, ctl: SeriesControl = DEFAULT_CONTROL):
    """B_nu(z) - 1, summed directly so small-z values carry no cancellation."""
    return _series(nu, z, ctl, keep_leading=False)


def bessel_series_deriv(nu: float, z, ctl: SeriesControl = DEFAULT_CONTROL):
    """d/dz B_nu(z) via the shift identity B_nu' = -B_{nu+1} / (4 (nu+1))."""
    nu = _require_order(nu)
    return bessel_series(nu + 1.0, z, ctl) * (-0.25 / (1.0 + nu))


def bessel_j(nu: float, w, ctl: SeriesControl = DEFAULT_CONTROL):
    """Bessel function J_nu(w) = (w/2)^nu B_nu(w^2) / Gamma(1+nu).

    For fractional nu and w off the positive real axis the principal
    branch of (w/2)^nu is used.  w = 0 requires nu >= 0.
    """
    nu = _require_order(nu)
    arr = np.asarray(w)
    scalar = arr.ndim == 0
    work = arr.astype(complex) if np.iscomplexobj(arr) else arr.astype(float)
    if np.any(work == 0.0) and nu < 0.0:
        raise DomainError(f"J_nu is singular at w=0 for negative order nu={nu}")
    series = bessel_series(nu, work * work, ctl)
    g = math.gamma(1.0 + nu)
    if np.iscomplexobj(work) or (np.any(np.real(work) < 0.0) and nu != round(nu)):
        half = np.where(work == 0.0, 1.0, work).astype(complex) / 2.0
        pref = np.exp(nu * np.log(half))
    else:
        # real path: w >= 0, or integer order where the power keeps the sign
        pref = np.power(np.where(work == 0.0, 1.0, work) / 2.0, nu)
    pref = np.where(work == 0.0, 0.0 if nu > 0 else 1.0, pref)
    out = pref * series / g
    return out[()] if scalar else out


def bessel_i(nu: float, x, ctl: SeriesControl = DEFAULT_CONTROL):
    """Modified Bessel I_nu(x) = (x/2)^nu B_nu(-x^2) / Gamma(1+nu), x >= 0.

    In the squared argument the terms are all positive, so there is no
    cancellation on this path.
    """
    nu = _require_order(nu)
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    if np.any(arr < 0.0):
        raise DomainError("bessel_i expects x >= 0")
    if np.any(arr == 0.0) and nu < 0.0:
        raise DomainError(f"I_nu is singular at x=0 for negative order nu={nu}")
    series = bessel_series(nu, -(arr * arr), ctl)
    pref = np.where(arr == 0.0, 0.0 if nu > 0 else 1.0, (arr / 2.0) ** nu)
    out = pref * series / math.gamma(1.0 + nu)
    return out[()] if scalar else out


def gamma_ratio(beta: float) -> float:
    """Gamma(-beta)/Gamma(beta) for the wedge opening parameter.

    Computed as -Gamma(1-beta)/Gamma(1+beta), which keeps both gamma
    arguments inside (0, 2); the two forms agree by the functional
    equation Gamma(x+1) = x Gamma(x).
    """
    beta = float(beta)
    if not (0.5 <= beta < 1.0):
        raise DomainError(f"gamma_ratio expects beta in [1/2, 1), got {beta}")
    return -math.gamma(1.0 - beta) / math.gamma(1.0 + beta)


# ---------------------------------------------------------------------------
# Zeros of J_nu


_zero_cache: dict[tuple[float, int], float] = {}
_zero_lock = threading.Lock()

_SCAN_STEP = 0.045
_SCAN_START = 0.05


def _scan_sign_changes(nu: float, x_hi: float, ctl: SeriesControl) -> list[tuple[float, float]]:
    """Brackets of sign changes of B_nu(x^2) on (0, x_hi].

    Uses the raw float64 pass (no high-precision rescue): only signs are
    needed and any grid value small enough to have an uncertain sign is
    within ~1e-8 of the zero, far tighter than the bracket width.
    """
    grid = np.arange(_SCAN_START, x_hi, _SCAN_STEP)
    vals, _, conv = _series_float(nu, grid * grid, ctl, keep_leading=True)
    if not conv.all():
        raise ConvergenceError("series did not converge during zero scan")
    s = np.sign(vals)
    idx = np.nonzero(s[:-1] * s[1:] < 0)[0]
    return [(float(grid[i]), float(grid[i + 1])) for i in idx]


def _refine_zero(nu: float, lo: float, hi: float, ctl: SeriesControl) -> float:
    # Bisection needs signs only: a sign is trustworthy above the float64
    # floor, so the high-precision rescue stays off until the Newton polish.
    signs_only = SeriesControl(
        rel_tol=ctl.rel_tol,
        max_terms=ctl.max_terms,
        domain_radius=ctl.domain_radius,
        hp_target=0.999,
    )
    f_lo = bessel_series(nu, lo * lo, signs_only)
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        f_mid = bessel_series(nu, mid * mid, signs_only)
        if f_mid == 0.0:
            lo = hi = mid
            break
        if (f_lo < 0) == (f_mid < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    # Newton polish on f(x) = B_nu(x^2); the high-precision rescue keeps the
    # residual meaningful arbitrarily close to the zero.
    for _ in range(4):
        f = bessel_series(nu, x * x, ctl)
        df = 2.0 * x * bessel_series_deriv(nu, x * x, ctl)
        if df == 0.0:
            break
        step = f / df
        x -= step
        if abs(step) <= 1e-16 * x:
            break
    return x


def bessel_zero(nu: float, m: int, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """m-th strictly positive zero of J_nu, to ~1e-14 relative.

    Valid for nu > -1 (all J_nu zeros are then real and simple).  Raises
    RangeError when the requested zero may fall outside the trusted series
    window, using the guard m*pi + nu <= sqrt(domain_radius).
    """
    nu = _require_order(nu)
    if m < 1:
        raise DomainError(f"zero index m must be >= 1, got {m}")
    key = (nu, m)
    with _zero_lock:
        if key in _zero_cache:
            return _zero_cache[key]
    x_hi = math.sqrt(ctl.domain_radius)
    # Fast reject: the m-th zero certainly exceeds the window when the
    # McMahon-style bound does.  Otherwise scan and count, which keeps
    # zeros that genuinely sit inside the window even when the coarse
    # bound m*pi + nu <= sqrt(Z) is violated.
    if m * math.pi + nu > x_hi + 8.0:
        raise RangeError(
            f"zero ({nu}, {m}) lies outside the trusted window sqrt(Z)={x_hi:.3g}"
        )
    brackets = _scan_sign_changes(nu, x_hi, ctl)
    if len(brackets) < m:
        raise RangeError(
            f"only {len(brackets)} zeros of J_{nu} found inside the window, need {m}"
        )
    root = _refine_zero(nu, *brackets[m - 1], ctl)
    with _zero_lock:
        _zero_cache[key] = root
    return root
