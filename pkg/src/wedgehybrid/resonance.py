"""Complex resonance poles of the coupled operator.

The resonances solve det(Theta - Q_H(z)) = 0, i.e.

    (gamma - i/sqrt(z)) (alpha - Q_W(z)) = eps^2,

with z continued off the positive axis.  At eps = 0 each positive
non-Friedrichs level lam_m (root of Q_W = alpha in the m-th pole gap) is a
real solution; switching on the coupling moves it into the lower half
plane by w_m eps^2 + higher order, where w_m has negative imaginary part.

Branch choice (this is the one decision everything hangs on): the root in
the lead factor must be the analytic continuation of the positive root on
the upper rim of the cut [0, inf) into the lower half-plane, i.e. the
second sheet of the resolvent.  That continuation coincides with the
principal branch of sqrt: positive real part and small negative imaginary
part just below the positive axis, and i*sqrt(|z|) on the negative axis.
Using the physical-sheet determination (Im sqrt > 0 everywhere) instead
would reflect every candidate root back across the cut and the Newton /
fixed-point iterations could never leave the real axis.  All functions in
this module therefore use numpy's principal sqrt, NOT qkrein.sqrt_upper.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError, RangeError
from .qkrein import q_wedge, q_wedge_deriv
from .specfun import DEFAULT_CONTROL, SeriesControl
from .spectra import gap_root
from .types import CouplingMatrix, WedgeGeometry

__all__ = [
    "ResonanceMethod",
    "Resonance",
    "SweepRow",
    "SweepResult",
    "secular_det",
    "secular_det_deriv",
    "weak_coupling_w",
    "resonance_fixed_point",
    "resonance_newton",
    "resonance_at",
    "sweep_eps",
    "sweep_beta",
]


class ResonanceMethod(enum.Enum):
    PERTURBATIVE = "PERTURBATIVE"
    FIXED_POINT = "FIXED_POINT"
    NEWTON = "NEWTON"


@dataclass(frozen=True)
class Resonance:
    z: complex
    m: int
    eps: float
    method: ResonanceMethod
    iterations: int
    residual: float
    steps: tuple[float, ...] = field(default=())


@dataclass(frozen=True)
class SweepRow:
    param: float
    re_z: float
    im_z: float
    method: str
    residual: float
    ok: bool = True


@dataclass(frozen=True)
class SweepResult:
    rows: list[SweepRow]
    warning_index: int | None = None


def _lead_factor(theta: CouplingMatrix, z):
    sq = np.sqrt(np.asarray(z, dtype=complex))
    if np.any(sq == 0.0):
        raise DomainError("secular determinant is singular at z = 0")
    return theta.gamma - 1j / sq


def secular_det(geom: WedgeGeometry, theta: CouplingMatrix, z, ctl: SeriesControl = DEFAULT_CONTROL):
    """det(Theta - Q_H) = (gamma - i/sqrt z)(alpha - Q_W) - eps^2.

    Second-sheet root convention (see module docstring).  Scalar or array z.
    """
    arr = np.asarray(z, dtype=complex)
    lead = _lead_factor(theta, arr)
    qw = q_wedge(geom, arr, ctl)
    out = lead * (theta.alpha - qw) - theta.eps**2
    return out[()] if np.asarray(z).ndim == 0 else out


def secular_det_deriv(geom: WedgeGeometry, theta: CouplingMatrix, z, ctl: SeriesControl = DEFAULT_CONTROL):
    """Analytic d/dz of the secular determinant (same branch convention)."""
    arr = np.asarray(z, dtype=complex)
    sq = np.sqrt(arr)
    if np.any(sq == 0.0):
        raise DomainError("secular determinant is singular at z = 0")
    qw = q_wedge(geom, arr, ctl)
    dqw = q_wedge_deriv(geom, arr, ctl)
    dlead = 0.5j / (arr * sq)  # d/dz (-i z^{-1/2})
    out = dlead * (theta.alpha - qw) - (theta.gamma - 1j / sq) * dqw
    return out[()] if np.asarray(z).ndim == 0 else out


def weak_coupling_w(
    geom: WedgeGeometry,
    alpha: float,
    gamma: float,
    m: int,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> complex:
    """Leading resonance shift coefficient: pole = lam_m + w_m eps^2 + O(eps^4).

    w_m = -(gamma*lam_m + i*sqrt(lam_m)) / (rho * (gamma^2 lam_m + 1)) with
    rho the squared deficiency norm at lam_m; its imaginary part is
    strictly negative, the real part carries the sign of -gamma.
    """
    lam = gap_root(geom, alpha, m, ctl)
    rho = float(np.real(q_wedge_deriv(geom, lam, ctl)))
    denom = rho * (gamma * gamma * lam + 1.0)
    return complex(-gamma * lam / denom, -math.sqrt(lam) / denom)


def _coupling_map(theta: CouplingMatrix, z: complex) -> complex:
    """f(z) = alpha - eps^2 sqrt z / (gamma sqrt z - i), second-sheet root."""
    sq = complex(np.sqrt(complex(z)))
    den = theta.gamma * sq - 1j
    if den == 0.0:
        raise DomainError(f"coupling map singular at z={z!r}")
    return theta.alpha - theta.eps**2 * sq / den


def resonance_fixed_point(
    geom: WedgeGeometry,
    theta: CouplingMatrix,
    m: int,
    tol: float = 1e-12,
    max_iter: int = 80,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> Resonance:
    """Weak-coupling recursion started on the parent level lam_m.

    Solves Q_W(z) = f(z) by iterating the update with the slope frozen at
    rho = dQ_W/dz(lam_m):

        z_{k+1} = z_k - (Q_W(z_k) - f(z_k)) / rho,

    whose first step from z_0 = lam_m is the leading-order displacement
    (f(lam_m) - alpha)/rho = w_m eps^2 and whose step ratio contracts like
    O(eps^2).  Raises ConvergenceError (try resonance_newton) when the
    steps stop contracting, e.g. outside the weak-coupling regime.
    """
    lam = gap_root(geom, theta.alpha, m, ctl)
    rho = float(np.real(q_wedge_deriv(geom, lam, ctl)))
    z = complex(lam)
    steps: list[float] = []
    for k in range(1, max_iter + 1):
        qw = complex(q_wedge(geom, z, ctl))
        step = (qw - _coupling_map(theta, z)) / rho
        z = z - step
        if abs(z) > ctl.domain_radius:
            raise ConvergenceError(
                f"fixed point left the series window at iteration {k}"
            )
        steps.append(abs(step))
        if abs(step) <= tol * max(1.0, abs(z)):
            residual = abs(secular_det(geom, theta, z, ctl)) if z != 0 else math.inf
            return Resonance(
                z=z,
                m=m,
                eps=theta.eps,
                method=ResonanceMethod.FIXED_POINT,
                iterations=k,
                residual=float(residual),
                steps=tuple(steps),
            )
        if len(steps) >= 3 and steps[-1] > steps[-2] >= steps[-3]:
            raise ConvergenceError(
                "fixed-point steps stopped contracting; seed resonance_newton instead"
            )
    raise ConvergenceError(f"fixed point did not converge in {max_iter} iterations")


def resonance_newton(
    geom: WedgeGeometry,
    theta: CouplingMatrix,
    z0: complex,
    tol: float = 1e-12,
    max_iter: int = 50,
    m: int = 0,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> Resonance:
    """Newton polish of the secular determinant from seed z0.

    The derivative is analytic (series derivative of Q_W plus the explicit
    lead term); a central complex difference with step 1e-7*max(1,|z|)
    stands in if the analytic value degenerates.
    """
    z = complex(z0)
    if abs(z) > ctl.domain_radius:
        raise RangeError(f"seed {z0!r} outside the series window")
    prev_step = math.inf
    growths = 0
    for k in range(1, max_iter + 1):
        d = complex(secular_det(geom, theta, z, ctl))
        scale = max(1.0, abs(theta.alpha) + abs(theta.gamma), theta.eps**2)
        if abs(d) <= tol * scale:
            return Resonance(
                z=z,
                m=m,
                eps=theta.eps,
                method=ResonanceMethod.NEWTON,
                iterations=k - 1,
                residual=abs(d),
            )
        try:
            dd = complex(secular_det_deriv(geom, theta, z, ctl))
        except Exception:
            dd = 0.0
        if not np.isfinite(dd) or abs(dd) < 1e-250:
            h = 1e-7 * max(1.0, abs(z))
            dd = (
                complex(secular_det(geom, theta, z + h, ctl))
                - complex(secular_det(geom, theta, z - h, ctl))
            ) / (2.0 * h)
        if dd == 0.0:
            raise ConvergenceError(f"Newton derivative vanished at z={z!r}")
        step = d / dd
        z = z - step
        if abs(z) > ctl.domain_radius:
            raise ConvergenceError("Newton iterate left the series window")
        if abs(step) > 2.0 * prev_step:
            growths += 1
            if growths >= 3:
                raise ConvergenceError("Newton steps diverging")
        prev_step = abs(step)
    raise ConvergenceError(f"Newton did not converge in {max_iter} iterations")


def resonance_at(
    geom: WedgeGeometry,
    alpha: float,
    gamma: float,
    eps: float,
    m: int,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> Resonance:
    """Resonance attached to gap m at the given coupling, robustly.

    Weak coupling: fixed point then Newton.  When the fixed point fails to
    contract (large eps) the root is tracked by Newton continuation along
    an eps ladder, predictor-corrected with the leading shift w_m.
    """
    theta = CouplingMatrix(alpha=alpha, gamma=gamma, eps=eps)
    lam = gap_root(geom, alpha, m, ctl)
    if eps == 0.0:
        res = abs(secular_det(geom, theta, complex(lam), ctl))
        return Resonance(
            z=complex(lam), m=m, eps=0.0, method=ResonanceMethod.FIXED_POINT,
            iterations=0, residual=float(res),
        )
    try:
        seed = resonance_fixed_point(geom, theta, m, ctl=ctl)
        out = resonance_newton(geom, theta, seed.z, m=m, ctl=ctl)
        return out
    except ConvergenceError:
        pass
    w = weak_coupling_w(geom, alpha, gamma, m, ctl)
    z = complex(lam)
    e_prev = 0.0
    for e in np.linspace(eps / 8.0, eps, 12):
        z_seed = z + w * (e * e - e_prev * e_prev)
        theta_e = CouplingMatrix(alpha=alpha, gamma=gamma, eps=float(e))
        z = resonance_newton(geom, theta_e, z_seed, m=m, ctl=ctl).z
        e_prev = float(e)
    final = resonance_newton(geom, theta, z, m=m, ctl=ctl)
    return final


def sweep_eps(
    geom: WedgeGeometry,
    alpha: float,
    gamma: float,
    m: int,
    eps_grid,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> SweepResult:
    """Track the gap-m resonance along an ascending coupling grid.

    Continuation: each Newton solve is seeded at the previous root plus the
    leading-order predictor w_m * d(eps^2).  A failed solve ends the sweep
    with ``warning_index`` pointing at the first missing row.
    """
    grid = [float(e) for e in eps_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("eps grid must be strictly increasing")
    if grid and grid[0] < 0:
        raise DomainError("eps grid must be nonnegative")
    lam = gap_root(geom, alpha, m, ctl)
    w = weak_coupling_w(geom, alpha, gamma, m, ctl)
    rows: list[SweepRow] = []
    track: list[tuple[float, complex]] = []  # (eps^2, root) continuation history
    for i, e in enumerate(grid):
        try:
            if e == 0.0:
                r = resonance_at(geom, alpha, gamma, 0.0, m, ctl)
            elif not track:
                r = resonance_at(geom, alpha, gamma, e, m, ctl)
            else:
                # Secant predictor in eps^2; the leading-order slope w only
                # seeds the very first continuation step.
                e2 = e * e
                if len(track) >= 2:
                    (a2, za), (b2, zb) = track[-2], track[-1]
                    seed = zb + (zb - za) / (b2 - a2) * (e2 - b2)
                else:
                    b2, zb = track[-1]
                    seed = zb + w * (e2 - b2)
                theta = CouplingMatrix(alpha=alpha, gamma=gamma, eps=e)
                r = resonance_newton(geom, theta, seed, m=m, ctl=ctl)
        except (ConvergenceError, RangeError):
            return SweepResult(rows=rows, warning_index=i)
        rows.append(
            SweepRow(param=e, re_z=r.z.real, im_z=r.z.imag,
                     method=r.method.value, residual=r.residual)
        )
        track.append((e * e, r.z))
    return SweepResult(rows=rows, warning_index=None)


def sweep_beta(
    alpha: float,
    gamma: float,
    eps: float,
    m: int,
    beta_grid,
    ctl: SeriesControl = DEFAULT_CONTROL,
    workers: int | None = None,
) -> SweepResult:
    """Resonance of gap m across wedge openings at fixed coupling.

    Each opening is solved independently (failed rows are recorded and the
    sweep continues), so the grid may be fanned out over ``workers``
    threads; rows always come back in grid order.
    """
    grid = [float(b) for b in beta_grid]

    def solve(b: float) -> SweepRow:
        try:
            geom = WedgeGeometry(b)
            r = resonance_at(geom, alpha, gamma, eps, m, ctl)
            return SweepRow(param=b, re_z=r.z.real, im_z=r.z.imag,
                            method=r.method.value, residual=r.residual)
        except (ConvergenceError, RangeError, DomainError):
            return SweepRow(param=b, re_z=math.nan, im_z=math.nan,
                            method="FAILED", residual=math.nan, ok=False)

    if workers and workers > 1 and len(grid) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(solve, grid))
    else:
        rows = [solve(b) for b in grid]
    had_failure = next((i for i, r in enumerate(rows) if not r.ok), None)
    return SweepResult(rows=rows, warning_index=had_failure)
