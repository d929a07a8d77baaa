"""Spectral tools for binary codes and the first linear programming bound."""

from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
