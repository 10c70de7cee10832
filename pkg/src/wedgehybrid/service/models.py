"""Pydantic request/response models for the compute service.

Field names double as the config-file keys of the CLI, and every response
echoes the fully resolved request (grids expanded to explicit lists) so a
saved JSON output can be replayed as a config.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class BaseParams(BaseModel):
    beta: float = Field(0.5, ge=0.5, lt=1.0, description="wedge opening parameter")
    alpha: float = Field(0.0, description="wedge extension parameter")
    gamma: float = Field(1.0, description="lead point-interaction parameter")
    eps: float = Field(0.0, ge=0.0, description="lead/wedge coupling strength")


class SpectrumRequest(BaseParams):
    e_max: float | None = Field(None, gt=0.0, description="energy window for embedded levels")
    lambda_min: float = Field(-100.0, lt=0.0, description="lower end of the bound-state scan")


class ResonancesRequest(BaseParams):
    m_list: list[int] = Field(default_factory=lambda: [1], description="pole-gap indices")


class SweepEpsRequest(BaseModel):
    beta: float = Field(0.5, ge=0.5, lt=1.0)
    alpha: float = 0.0
    gamma: float = 1.0
    m: int = Field(1, ge=1)
    eps_grid: list[float] = Field(..., min_length=1)


class SweepBetaRequest(BaseModel):
    alpha: float = 0.0
    gamma: float = 1.0
    eps: float = Field(1.0, ge=0.0)
    m: int = Field(1, ge=1)
    beta_grid: list[float] = Field(..., min_length=1)


class ScatterRequest(BaseParams):
    k_grid: list[float] = Field(..., min_length=1)


class KernelRequest(BaseParams):
    z_re: float = Field(-2.0, description="Re of the spectral parameter")
    z_im: float = Field(0.0, description="Im of the spectral parameter")
    x: float = Field(0.0, ge=0.0, description="half-line source coordinate")
    y: float = Field(0.0, ge=0.0, description="half-line target coordinate")
    p_r: float = Field(0.5, gt=0.0, le=1.0)
    p_theta: float = Field(1.0, ge=0.0)
    q_r: float = Field(0.5, gt=0.0, le=1.0)
    q_theta: float = Field(1.0, ge=0.0)
    mode_tol: float | None = Field(None, gt=0.0)
    e_window: float = Field(350.0, gt=0.0)


class SelftestRequest(BaseModel):
    pass


class RunResponse(BaseModel):
    config: dict
    rows: list[dict]


class ErrorBody(BaseModel):
    error: str
    message: str
