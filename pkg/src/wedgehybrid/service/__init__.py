"""HTTP service wrapping the spectral engine."""

from .app import app, create_app

__all__ = ["app", "create_app"]
