"""Cohomology, auxiliary prime search and mildness certificates for marked curves over Q."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import MarkedCurveError, SearchExhaustedError, UnsupportedPrimeError

__all__ = ["MarkedCurveError", "SearchExhaustedError", "UnsupportedPrimeError", "__version__"]
