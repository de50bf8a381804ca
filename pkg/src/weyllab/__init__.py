"""Localized degenerate solutions of the massless Dirac and Weyl equations.

Closed-form spinor families, their spin observables, the families of
electromagnetic 4-potentials that leave them unchanged, and an independent
finite-difference verifier for all of it.
"""

from weyllab.errors import (
    ConfigError,
    DegenerateDensity,
    DimensionMismatch,
    FloorDominated,
    ProfileNonpositive,
    QuadratureError,
    WeylLabError,
    ZeroCharge,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DegenerateDensity",
    "DimensionMismatch",
    "FloorDominated",
    "ProfileNonpositive",
    "QuadratureError",
    "WeylLabError",
    "ZeroCharge",
    "__version__",
]
