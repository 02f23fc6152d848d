"""Spectral gaps of symmetric random-circuit ensembles via sector-resolved moments."""

from .hilbert import SUD, U1

__version__ = "0.1.0"

__all__ = ["U1", "SUD", "__version__"]
