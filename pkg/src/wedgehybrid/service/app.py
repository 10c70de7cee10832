"""FastAPI application exposing the spectral engine.

One POST endpoint per computation.  Library errors map onto structured
JSON bodies: domain problems (bad parameter regions, poles, windows) come
back as 400, accuracy/convergence failures as 422 with ``error`` set to
"accuracy".  WEDGEHYBRID_THREADS caps the worker threads used for
independent grid points (opening sweeps); continuation chains stay
sequential by construction.
"""

from __future__ import annotations

import os

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import AccuracyError, DomainError
from ..greens import resolvent_hybrid
from ..resonance import resonance_at, sweep_beta, sweep_eps
from ..scattering import phase_scan
from ..selftest import run_selftest
from ..spectra import classify_spectrum
from ..types import CouplingMatrix, WedgeGeometry, WedgePoint
from . import rows as R
from .models import (
    KernelRequest,
    ResonancesRequest,
    RunResponse,
    ScatterRequest,
    SelftestRequest,
    SpectrumRequest,
    SweepBetaRequest,
    SweepEpsRequest,
)


def _workers() -> int | None:
    raw = os.environ.get("WEDGEHYBRID_THREADS", "").strip()
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError:
        return None
    return n if n > 1 else None


def _config(req, command: str) -> dict:
    out = {"command": command}
    out.update(req.model_dump())
    return out


def create_app() -> FastAPI:
    app = FastAPI(title="wedgehybrid service", version=__version__)

    @app.exception_handler(DomainError)
    async def _domain(request, exc):
        return JSONResponse(status_code=400, content={"error": "domain", "message": str(exc)})

    @app.exception_handler(AccuracyError)
    async def _accuracy(request, exc):
        return JSONResponse(status_code=422, content={"error": "accuracy", "message": str(exc)})

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/v1/spectrum", response_model=RunResponse)
    def spectrum(req: SpectrumRequest):
        geom = WedgeGeometry(req.beta)
        theta = CouplingMatrix(alpha=req.alpha, gamma=req.gamma, eps=req.eps)
        report = classify_spectrum(geom, theta, e_max=req.e_max, lambda_min=req.lambda_min)
        cfg = _config(req, "spectrum")
        cfg["e_max"] = report.e_max  # echo the resolved window
        return RunResponse(config=cfg, rows=R.spectrum_rows(report))

    @app.post("/v1/resonances", response_model=RunResponse)
    def resonances(req: ResonancesRequest):
        geom = WedgeGeometry(req.beta)
        items = [
            resonance_at(geom, req.alpha, req.gamma, req.eps, m) for m in req.m_list
        ]
        return RunResponse(config=_config(req, "resonances"), rows=R.resonance_rows(items))

    @app.post("/v1/sweep-eps", response_model=RunResponse)
    def sweep_eps_endpoint(req: SweepEpsRequest):
        geom = WedgeGeometry(req.beta)
        result = sweep_eps(geom, req.alpha, req.gamma, req.m, req.eps_grid)
        cfg = _config(req, "sweep-eps")
        if result.warning_index is not None:
            cfg["warning_index"] = result.warning_index
        return RunResponse(config=cfg, rows=R.sweep_rows(result))

    @app.post("/v1/sweep-beta", response_model=RunResponse)
    def sweep_beta_endpoint(req: SweepBetaRequest):
        result = sweep_beta(
            req.alpha, req.gamma, req.eps, req.m, req.beta_grid, workers=_workers()
        )
        cfg = _config(req, "sweep-beta")
        if result.warning_index is not None:
            cfg["warning_index"] = result.warning_index
        return RunResponse(config=cfg, rows=R.sweep_rows(result))

    @app.post("/v1/scatter", response_model=RunResponse)
    def scatter(req: ScatterRequest):
        geom = WedgeGeometry(req.beta)
        theta = CouplingMatrix(alpha=req.alpha, gamma=req.gamma, eps=req.eps)
        records = phase_scan(geom, theta, req.k_grid)
        return RunResponse(config=_config(req, "scatter"), rows=R.scatter_rows(records))

    @app.post("/v1/kernel", response_model=RunResponse)
    def kernel(req: KernelRequest):
        geom = WedgeGeometry(req.beta)
        theta = CouplingMatrix(alpha=req.alpha, gamma=req.gamma, eps=req.eps)
        z = complex(req.z_re, req.z_im)
        p = WedgePoint(req.p_r, req.p_theta).validate_in(geom)
        q = WedgePoint(req.q_r, req.q_theta).validate_in(geom)
        hk = resolvent_hybrid(
            geom, theta, z, req.x, req.y, p, q,
            mode_tol=req.mode_tol, e_window=req.e_window,
        )
        rows = [
            {"block": "lead_lead", "re": hk.lead_lead.real, "im": hk.lead_lead.imag,
             "tail_estimate": 0.0, "modes": 0},
            {"block": "lead_wedge", "re": hk.lead_wedge.real, "im": hk.lead_wedge.imag,
             "tail_estimate": 0.0, "modes": 0},
            {"block": "wedge_lead", "re": hk.wedge_lead.real, "im": hk.wedge_lead.imag,
             "tail_estimate": 0.0, "modes": 0},
            {"block": "wedge_wedge", "re": hk.wedge_wedge.real, "im": hk.wedge_wedge.imag,
             "tail_estimate": hk.tail_estimate, "modes": hk.modes},
        ]
        return RunResponse(config=_config(req, "kernel"), rows=rows)

    @app.post("/v1/selftest", response_model=RunResponse)
    def selftest(req: SelftestRequest):
        report = run_selftest()
        cfg = {"command": "selftest", "passed": report.passed}
        return RunResponse(config=cfg, rows=R.selftest_rows(report))

    return app


app = create_app()
