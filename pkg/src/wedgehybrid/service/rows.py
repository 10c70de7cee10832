"""Row dictionaries shared by the service responses and the CLI tables.

COLUMNS fixes the CSV column order per command; the row builders emit
dicts with exactly those keys.  Non-finite floats (failed sweep rows)
become None so the payload stays strict JSON.
"""

from __future__ import annotations

import math

from ..resonance import Resonance, SweepResult
from ..scattering import ScatteringRecord
from ..selftest import SelftestReport
from ..spectra import SpectrumReport


def _finite(v: float) -> float | None:
    return v if math.isfinite(v) else None

COLUMNS = {
    "spectrum": ["lambda", "tag", "m", "n", "residual"],
    "resonances": ["m", "eps", "re_z", "im_z", "method", "iterations", "residual"],
    "sweep-eps": ["param", "re_z", "im_z", "method", "residual"],
    "sweep-beta": ["param", "re_z", "im_z", "method", "residual"],
    "scatter": ["k", "lambda", "re_refl", "im_refl", "phase", "phase_unwrapped", "flagged"],
    "kernel": ["block", "re", "im", "tail_estimate", "modes"],
    "selftest": ["check", "passed", "residual", "tol", "detail"],
}


def spectrum_rows(report: SpectrumReport) -> list[dict]:
    return [
        {
            "lambda": p.lam,
            "tag": p.tag.value,
            "m": p.m,
            "n": p.n,
            "residual": p.residual,
        }
        for p in report.point
    ]


def resonance_rows(items: list[Resonance]) -> list[dict]:
    return [
        {
            "m": r.m,
            "eps": r.eps,
            "re_z": r.z.real,
            "im_z": r.z.imag,
            "method": r.method.value,
            "iterations": r.iterations,
            "residual": r.residual,
        }
        for r in items
    ]


def sweep_rows(result: SweepResult) -> list[dict]:
    return [
        {
            "param": r.param,
            "re_z": _finite(r.re_z),
            "im_z": _finite(r.im_z),
            "method": r.method,
            "residual": _finite(r.residual),
        }
        for r in result.rows
    ]


def scatter_rows(records: list[ScatteringRecord]) -> list[dict]:
    return [
        {
            "k": r.k,
            "lambda": r.lam,
            "re_refl": r.refl.real,
            "im_refl": r.refl.imag,
            "phase": r.phase,
            "phase_unwrapped": r.phase_unwrapped,
            "flagged": r.flagged,
        }
        for r in records
    ]


def selftest_rows(report: SelftestReport) -> list[dict]:
    return [
        {
            "check": r.name,
            "passed": r.passed,
            "residual": r.residual,
            "tol": r.tol,
            "detail": r.detail,
        }
        for r in report.results
    ]
