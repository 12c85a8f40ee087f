"""Shared exception types."""

from __future__ import annotations


class TruncationError(RuntimeError):
    """A result needs data beyond the computed degree cap."""

    def __init__(self, msg: str, cap: int):
        super().__init__(f"{msg} (degree cap {cap})")
        self.cap = cap


class HypothesisError(ValueError):
    """A check was invoked on inputs violating its stated hypotheses."""


class DimensionError(ValueError):
    """An intersection or fiber is not zero-dimensional."""


class GenericityError(RuntimeError):
    """Random draws exhausted the retry budget without passing genericity."""
