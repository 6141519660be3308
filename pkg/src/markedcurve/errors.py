"""Exception types raised by the library."""

from __future__ import annotations


class MarkedCurveError(ValueError):
    """Base class for domain errors (bad inputs, violated preconditions)."""


class UnsupportedPrimeError(MarkedCurveError):
    """Raised for p = 2 or a non-prime coefficient modulus."""


class SearchExhaustedError(MarkedCurveError):
    """A bounded prime search ran out of candidates.

    ``trace`` carries whatever partial progress was made so callers can
    report it.
    """

    def __init__(self, message: str, trace: list | None = None):
        super().__init__(message)
        self.trace = list(trace or [])
