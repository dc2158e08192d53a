"""Numerical laboratory for sharp martingale inequalities and Riesz transforms."""
from . import burkholder, constants, martsim, specfun, spectral

__all__ = ["specfun", "constants", "burkholder", "martsim", "spectral"]
