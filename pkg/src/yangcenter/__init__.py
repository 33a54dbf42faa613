"""Exact checks for R-matrices, Brauer symmetrizers and central series of the
double Yangian of types B, C, D in the vacuum module."""

__version__ = "0.1.0"

from .context import AlgebraContext, ConfigError  # noqa: E402

__all__ = ["AlgebraContext", "ConfigError", "__version__"]
