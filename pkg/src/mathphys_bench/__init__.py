"""Numerical reproductions of fourteen worked mathematical-physics problems.

Each module pairs the closed-form results with an independent numerical
route (quadrature, ODE integration, finite differences or Monte Carlo)
so that every quoted value can be checked rather than trusted.
"""

from . import (cosmo, electrostatics, errors, heatburgers, higgs, mechanics, numerics, quantum,
               ultrametric, volterra, walk)

__version__ = "0.1.0"

__all__ = ["cosmo", "electrostatics", "errors", "heatburgers", "higgs", "mechanics", "numerics",
           "quantum", "ultrametric", "volterra", "walk", "__version__"]
