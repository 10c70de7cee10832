"""Real spectral points of the wedge, the lead and the hybrid.

Classification follows the structure of the coupled operator: the
Dirichlet (Friedrichs) wedge eigenvalues are squared Bessel zeros
lam_{m, n*beta}^2; those with n > 1 stay embedded eigenvalues of every
extension and of the hybrid.  The non-Friedrichs levels solve
Q_W(lam) = alpha, one root per pole gap by strict monotonicity plus a
single root below the first pole.  The decoupled lead contributes
-1/gamma^2 for gamma > 0, and the hybrid bound states solve

    (gamma - Q_L(lam)) (alpha - Q_W(lam)) = eps^2,   lam < 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PoleError, RangeError, WedgeHybridError
from .qkrein import q_wedge, q_wedge_deriv, wedge_poles
from .specfun import DEFAULT_CONTROL, SeriesControl, bessel_j, bessel_zero
from .types import CouplingMatrix, WedgeGeometry

__all__ = [
    "SpectralTag",
    "SpectralPoint",
    "SigmaAlpha",
    "SpectrumReport",
    "E_MAX_WINDOW",
    "default_e_max",
    "friedrichs_eigenvalues",
    "wedge_eigenfunction",
    "embedded_spectrum",
    "singleton_root",
    "gap_root",
    "nonfriedrichs_spectrum",
    "lead_bound_state",
    "hybrid_discrete_spectrum",
    "classify_spectrum",
]

# Trusted eigenvalue window: squared zeros must stay well inside the series
# radius for the engine's accuracy promises to hold.
E_MAX_WINDOW = 350.0


class SpectralTag(enum.Enum):
    FRIEDRICHS_EMBEDDED = "FRIEDRICHS_EMBEDDED"
    NONFRIEDRICHS_POS = "NONFRIEDRICHS_POS"
    NONFRIEDRICHS_NEG = "NONFRIEDRICHS_NEG"
    LEAD_BOUND = "LEAD_BOUND"
    HYBRID_BOUND = "HYBRID_BOUND"


@dataclass(frozen=True)
class SpectralPoint:
    lam: float
    tag: SpectralTag
    m: int | None = None
    n: int | None = None
    residual: float = 0.0


@dataclass(frozen=True)
class SigmaAlpha:
    """Solutions of Q_W = alpha, split by sign.

    ``minus`` holds the below-zero part of the unique root under the first
    pole, ``zero`` is [0] exactly when alpha = -1, ``plus`` lists all
    nonnegative roots ascending (the sub-pole root when it is >= 0,
    followed by the interlaced roots, one per pole gap).
    """

    minus: list[SpectralPoint]
    zero: list[SpectralPoint]
    plus: list[SpectralPoint]


@dataclass(frozen=True)
class SpectrumReport:
    beta: float
    alpha: float
    gamma: float
    eps: float
    e_max: float
    lambda_min: float
    essential: tuple[float, float]
    absolutely_continuous: tuple[float, float]
    discrete: list[SpectralPoint]
    embedded: list[SpectralPoint]
    point: list[SpectralPoint]
    continuous_excluded: list[float] = field(default_factory=list)
    zero_is_eigenvalue: bool = False


def default_e_max(geom: WedgeGeometry, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """min(350, sixth wedge pole), keeping every request inside the window."""
    try:
        sixth = bessel_zero(geom.beta, 6, ctl) ** 2
    except RangeError:
        return E_MAX_WINDOW
    return min(E_MAX_WINDOW, sixth)


def _check_e_max(e_max: float):
    if not (0.0 < e_max <= E_MAX_WINDOW):
        raise RangeError(
            f"E_max must lie in (0, {E_MAX_WINDOW}], got {e_max} (series window)"
        )


# ---------------------------------------------------------------------------
# Friedrichs (Dirichlet) wedge spectrum


def friedrichs_eigenvalues(
    geom: WedgeGeometry,
    e_max: float,
    with_indices: bool = True,
    ctl: SeriesControl = DEFAULT_CONTROL,
):
    """All wedge Dirichlet eigenvalues lam_{m, n*beta}^2 <= e_max, ascending.

    Returns (lam2, m, n) triples, or bare values with with_indices=False.
    """
    _check_e_max(e_max)
    sqrt_e = math.sqrt(e_max)
    found = []
    n = 1
    while n * geom.beta < sqrt_e:  # first zero of J_nu exceeds nu
        nu = n * geom.beta
        m = 1
        while True:
            try:
                lam = bessel_zero(nu, m, ctl)
            except RangeError:
                break
            if lam * lam > e_max:
                break
            found.append((lam * lam, m, n))
            m += 1
        n += 1
    found.sort()
    if with_indices:
        return found
    return [lam2 for lam2, _, _ in found]


def wedge_eigenfunction(geom: WedgeGeometry, m: int, n: int, r, theta, ctl: SeriesControl = DEFAULT_CONTROL):
    """Normalized Dirichlet eigenfunction of the wedge at indices (m, n)."""
    if m < 1 or n < 1:
        raise DomainError(f"eigenfunction indices must be >= 1, got ({m}, {n})")
    nu = n * geom.beta
    lam = bessel_zero(nu, m, ctl)
    norm = 2.0 * math.sqrt(geom.beta / math.pi)
    denom = bessel_j(nu + 1.0, lam, ctl)
    return norm * bessel_j(nu, lam * np.asarray(r), ctl) / denom * np.sin(nu * np.asarray(theta))


def embedded_spectrum(geom: WedgeGeometry, e_max: float, ctl: SeriesControl = DEFAULT_CONTROL) -> list[SpectralPoint]:
    """Friedrichs eigenvalues with n > 1: embedded points of every hybrid."""
    out = []
    for lam2, m, n in friedrichs_eigenvalues(geom, e_max, ctl=ctl):
        if n > 1:
            res = abs(float(bessel_j(n * geom.beta, math.sqrt(lam2), ctl)))
            out.append(SpectralPoint(lam2, SpectralTag.FRIEDRICHS_EMBEDDED, m=m, n=n, residual=res))
    return out


# ---------------------------------------------------------------------------
# Non-Friedrichs levels: Q_W(lam) = alpha


def _bisect_increasing(func, lo: float, hi: float, iters: int = 90) -> float:
    f_lo = func(lo)
    f_hi = func(hi)
    if not (f_lo < 0.0 < f_hi):
        raise WedgeHybridError(
            f"bracket failure on [{lo}, {hi}]: f(lo)={f_lo:.3g}, f(hi)={f_hi:.3g}"
        )
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if func(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _polish_q_root(geom: WedgeGeometry, alpha: float, lam: float, lo: float, hi: float, ctl) -> float:
    for _ in range(4):
        try:
            f = float(np.real(q_wedge(geom, lam, ctl))) - alpha
            df = float(np.real(q_wedge_deriv(geom, lam, ctl)))
        except PoleError:
            break
        if df <= 0.0:
            break
        step = f / df
        new = lam - step
        if not (lo < new < hi):
            break
        lam = new
        if abs(step) <= 1e-15 * max(1.0, abs(lam)):
            break
    return lam


def _inset_bracket(geom, alpha, a: float, b: float, ctl):
    """Shrink endpoint insets until the monotone branch straddles alpha."""
    width = b - a
    lo = None
    hi = None
    inset = width / 8.0
    for _ in range(10):
        cand = a + inset
        try:
            if float(np.real(q_wedge(geom, cand, ctl))) - alpha < 0.0:
                lo = cand
                break
        except PoleError:
            pass
        inset /= 8.0
    inset = width / 8.0
    for _ in range(10):
        cand = b - inset
        try:
            if float(np.real(q_wedge(geom, cand, ctl))) - alpha > 0.0:
                hi = cand
                break
        except PoleError:
            pass
        inset /= 8.0
    if lo is None or hi is None or not (lo < hi):
        raise WedgeHybridError(
            f"could not bracket Q=alpha root in ({a}, {b}) for alpha={alpha}"
        )
    return lo, hi


def singleton_root(geom: WedgeGeometry, alpha: float, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """The unique solution of Q_W = alpha below the first pole.

    Negative iff alpha < -1, exactly 0 at alpha = -1 (Q_W(0) = -1 is an
    identity of the series, so the root is pinned without solving).
    """
    if not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha}")
    if alpha == -1.0:
        return 0.0
    first_pole = bessel_zero(geom.beta, 1, ctl) ** 2

    def f(lam):
        return float(np.real(q_wedge(geom, lam, ctl))) - alpha

    if alpha > -1.0:
        lo, hi = 0.0, None
        inset = first_pole / 8.0
        for _ in range(10):
            cand = first_pole - inset
            try:
                if f(cand) > 0.0:
                    hi = cand
                    break
            except PoleError:
                pass
            inset /= 8.0
        if hi is None:
            raise WedgeHybridError("could not bracket the sub-pole root from above")
    else:
        hi = 0.0
        lo = -1.0
        max_neg = -(ctl.domain_radius - 20.0)
        while f(lo) > 0.0:
            lo *= 4.0
            if lo < max_neg:
                raise RangeError(
                    f"root of Q=alpha for alpha={alpha} falls below the series window"
                )
    root = _bisect_increasing(f, lo, hi)
    return _polish_q_root(geom, alpha, root, lo, hi, ctl)


def gap_root(geom: WedgeGeometry, alpha: float, m: int, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """The root of Q_W = alpha interlaced in the m-th pole gap."""
    if m < 1:
        raise DomainError(f"gap index must be >= 1, got {m}")
    a = bessel_zero(geom.beta, m, ctl) ** 2
    try:
        b = bessel_zero(geom.beta, m + 1, ctl) ** 2
    except RangeError:
        b = ctl.domain_radius - 1.0
    if b > ctl.domain_radius:
        b = ctl.domain_radius - 1.0
    lo, hi = _inset_bracket(geom, alpha, a, b, ctl)

    def f(lam):
        return float(np.real(q_wedge(geom, lam, ctl))) - alpha

    root = _bisect_increasing(f, lo, hi)
    return _polish_q_root(geom, alpha, root, lo, hi, ctl)


def nonfriedrichs_spectrum(
    geom: WedgeGeometry,
    alpha: float,
    e_max: float,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> SigmaAlpha:
    """All solutions of Q_W = alpha up to e_max, classified by sign."""
    _check_e_max(e_max)

    def point(lam, m):
        tag = SpectralTag.NONFRIEDRICHS_NEG if lam < 0 else SpectralTag.NONFRIEDRICHS_POS
        res = abs(float(np.real(q_wedge(geom, lam, ctl))) - alpha) if lam != 0.0 else abs(-1.0 - alpha)
        return SpectralPoint(lam, tag, m=m, residual=res)

    base = singleton_root(geom, alpha, ctl)
    minus, zero, plus = [], [], []
    if base < 0.0:
        minus.append(point(base, 0))
    else:
        if base == 0.0:
            zero.append(point(0.0, 0))
        plus.append(point(base, 0))
    m = 1
    while True:
        try:
            if bessel_zero(geom.beta, m, ctl) ** 2 >= e_max:
                break
            root = gap_root(geom, alpha, m, ctl)
        except (RangeError, WedgeHybridError):
            break
        if root > e_max:
            break
        plus.append(point(root, m))
        m += 1
    return SigmaAlpha(minus=minus, zero=zero, plus=plus)


# ---------------------------------------------------------------------------
# Lead and hybrid


def lead_bound_state(gamma: float) -> SpectralPoint | None:
    """Bound state -1/gamma^2 of the decoupled half-line, present iff gamma > 0.

    gamma = 0 is the Neumann endpoint: no bound state.
    """
    if not math.isfinite(gamma):
        raise DomainError(f"gamma must be finite, got {gamma}")
    if gamma <= 0.0:
        return None
    lam = -1.0 / (gamma * gamma)
    residual = abs(1.0 / math.sqrt(-lam) - gamma)
    return SpectralPoint(lam, SpectralTag.LEAD_BOUND, residual=residual)


def _hybrid_det_neg(geom: WedgeGeometry, theta: CouplingMatrix, lam, ctl):
    """Secular determinant on the negative half-axis (everything real there)."""
    lam = np.asarray(lam, dtype=float)
    lead = 1.0 / np.sqrt(-lam)
    qw = np.real(q_wedge(geom, lam, ctl))
    return (theta.gamma - lead) * (theta.alpha - qw) - theta.eps**2


def _hybrid_det_neg_deriv(geom, theta, lam: float, ctl) -> float:
    lead = 1.0 / math.sqrt(-lam)
    dlead = 0.5 * (-lam) ** -1.5
    qw = float(np.real(q_wedge(geom, lam, ctl)))
    dqw = float(np.real(q_wedge_deriv(geom, lam, ctl)))
    return -dlead * (theta.alpha - qw) - (theta.gamma - lead) * dqw


def hybrid_discrete_spectrum(
    geom: WedgeGeometry,
    theta: CouplingMatrix,
    lambda_min: float = -100.0,
    ctl: SeriesControl = DEFAULT_CONTROL,
    panels: int = 1000,
) -> list[SpectralPoint]:
    """Negative eigenvalues of the coupled operator on [lambda_min, 0).

    Sign-scan over a uniform grid refined geometrically toward 0 (shallow
    states for large gamma), bisection on each bracket, Newton polish.
    """
    if lambda_min >= 0.0:
        raise DomainError(f"lambda_min must be negative, got {lambda_min}")
    if -lambda_min > ctl.domain_radius:
        raise RangeError(f"lambda_min={lambda_min} is outside the series window")
    edges = list(np.linspace(lambda_min, -0.1, panels + 1))
    tail = [-0.1 * 2.0**-i for i in range(1, 34)]
    edges = np.array(edges + tail)
    vals = _hybrid_det_neg(geom, theta, edges, ctl)
    sign = np.sign(vals)
    out = []
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        lo, hi = float(edges[i]), float(edges[i + 1])

        def f(lam):
            return float(_hybrid_det_neg(geom, theta, lam, ctl))

        # plain bisection, tracking which end the sign of f(lo) belongs to
        a, b = lo, hi
        fa = float(vals[i])
        for _ in range(80):
            mid = 0.5 * (a + b)
            if mid == a or mid == b:
                break
            fm = f(mid)
            if (fm < 0) == (fa < 0):
                a, fa = mid, fm
            else:
                b = mid
        root = 0.5 * (a + b)
        for _ in range(3):
            df = _hybrid_det_neg_deriv(geom, theta, root, ctl)
            if df == 0.0:
                break
            step = f(root) / df
            cand = root - step
            if not (min(lo, hi) <= cand <= max(lo, hi)):
                break
            root = cand
            if abs(step) <= 1e-15 * abs(root):
                break
        out.append(
            SpectralPoint(root, SpectralTag.HYBRID_BOUND, residual=abs(f(root)))
        )
    out.sort(key=lambda p: p.lam)
    return out


def classify_spectrum(
    geom: WedgeGeometry,
    theta: CouplingMatrix,
    e_max: float | None = None,
    lambda_min: float = -100.0,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> SpectrumReport:
    """Assemble the full spectral report of the coupled operator."""
    if e_max is None:
        e_max = default_e_max(geom, ctl)
    _check_e_max(e_max)
    discrete = hybrid_discrete_spectrum(geom, theta, lambda_min, ctl)
    embedded = embedded_spectrum(geom, e_max, ctl)
    point = sorted(discrete + embedded, key=lambda p: p.lam)
    return SpectrumReport(
        beta=geom.beta,
        alpha=theta.alpha,
        gamma=theta.gamma,
        eps=theta.eps,
        e_max=e_max,
        lambda_min=lambda_min,
        essential=(0.0, math.inf),
        absolutely_continuous=(0.0, math.inf),
        discrete=discrete,
        embedded=embedded,
        point=point,
        continuous_excluded=[p.lam for p in embedded],
        zero_is_eigenvalue=False,
    )
