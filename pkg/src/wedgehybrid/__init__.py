"""Spectral engine for a half-line glued to a non-convex Dirichlet wedge.

Core library layout:

    specfun     regularized Bessel series, J/I functions, zeros, gamma ratio
    qkrein      Q-functions, vertex profiles, renormalized trace
    spectra     real spectral points and their classification
    resonance   complex resonance poles, weak-coupling expansion, sweeps
    scattering  on-shell scattering matrix and reflection amplitude
    greens      resolvent kernels (lead, wedge, extensions, coupled system)
    quadrature  vertex-graded quadrature over the wedge
    selftest    built-in closed-form oracle suite
    service     FastAPI wrapper (one endpoint per computation)
    cli         thin command-line client of the service
"""

from .errors import (
    AccuracyError,
    ConvergenceError,
    DomainError,
    PoleError,
    RangeError,
    WedgeHybridError,
)
from .types import CouplingMatrix, WedgeGeometry, WedgePoint

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "ConvergenceError",
    "DomainError",
    "PoleError",
    "RangeError",
    "WedgeHybridError",
    "CouplingMatrix",
    "WedgeGeometry",
    "WedgePoint",
    "__version__",
]
