"""Exact classification of nondiagonal Einstein solvmanifold data on nice diagrams."""

from __future__ import annotations

from .exactnum import RadExt, format_radext, rad_sqrt_of_rational

__version__ = "0.1.0"

__all__ = ["RadExt", "format_radext", "rad_sqrt_of_rational", "__version__"]
