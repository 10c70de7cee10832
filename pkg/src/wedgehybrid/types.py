"""Domain value types: wedge geometry, vertex coupling data, wedge points."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class WedgeGeometry:
    """Planar sector of unit radius with interior angle pi/beta > pi.

    ``beta`` in [1/2, 1) is the opening parameter; the wedge is the set
    0 < r < 1, 0 < theta < pi/beta, with Dirichlet boundary away from the
    vertex.  beta = 1/2 is the slit disk (angle 2*pi).
    """

    beta: float

    def __post_init__(self):
        if not (0.5 <= self.beta < 1.0):
            raise DomainError(f"opening parameter beta must lie in [1/2, 1), got {self.beta}")

    @property
    def omega(self) -> float:
        """Interior angle pi/beta, in (pi, 2*pi]."""
        return math.pi / self.beta


@dataclass(frozen=True)
class CouplingMatrix:
    """Vertex coupling data (alpha, gamma, eps).

    The boundary condition at the glued vertex is encoded by the real
    symmetric matrix ``[[gamma, eps], [eps, alpha + 1]]``: gamma is the
    half-line point-interaction parameter, alpha labels the wedge
    self-adjoint extension, eps >= 0 is the lead/wedge coupling strength.
    """

    alpha: float
    gamma: float
    eps: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "gamma", "eps"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v}")
        if self.eps < 0:
            raise DomainError(f"coupling eps must be >= 0, got {self.eps}")

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.gamma, self.eps], [self.eps, self.alpha + 1.0]])

    @property
    def interaction_strength(self) -> float:
        """Point-interaction strength a = -1/gamma (gamma != 0)."""
        if self.gamma == 0.0:
            raise DomainError("interaction strength undefined for gamma = 0")
        return -1.0 / self.gamma


@dataclass(frozen=True)
class WedgePoint:
    """Polar point inside the (closed) wedge: 0 < r <= 1, 0 <= theta."""

    r: float
    theta: float

    def __post_init__(self):
        if not (0.0 < self.r <= 1.0):
            raise DomainError(f"radius must lie in (0, 1], got {self.r}")
        if self.theta < 0.0:
            raise DomainError(f"angle must be >= 0, got {self.theta}")

    def validate_in(self, geom: WedgeGeometry) -> "WedgePoint":
        if self.theta > geom.omega + 1e-15:
            raise DomainError(
                f"angle {self.theta} exceeds wedge opening {geom.omega} (beta={geom.beta})"
            )
        return self
