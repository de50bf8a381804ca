"""Probability density, spin vector, total spin and helicity from bilinears."""

from __future__ import annotations

import numpy as np

from weyllab.algebra import GAMMA, PAULI, bilinear
from weyllab.errors import DegenerateDensity, DimensionMismatch
from weyllab.solutions import ANTIPARTICLE, PARTICLE

DENSITY_FLOOR = 1e-30

# (i/2) gamma^j gamma^k for the cyclic pairs (2,3), (3,1), (1,2)
SPIN_OPERATORS = np.array(
    [0.5j * GAMMA[2] @ GAMMA[3], 0.5j * GAMMA[3] @ GAMMA[1], 0.5j * GAMMA[1] @ GAMMA[2]]
)


def density(psi) -> np.ndarray:
    """psi^dagger psi (real, non-negative)."""
    psi = np.asarray(psi, dtype=complex)
    return np.sum(psi.real**2 + psi.imag**2, axis=-1)


def _normalizer(psi, eps: float) -> np.ndarray:
    rho = density(psi)
    if np.any(rho <= eps):
        raise DegenerateDensity(f"density {np.min(rho):.3e} at or below floor {eps:.1e}")
    return rho


def spin_vector(psi, eps: float = DENSITY_FLOOR) -> np.ndarray:
    """Density-normalized spin expectation (S_x, S_y, S_z) of a 4-spinor.

    Each component is (i/2) psi^+ gamma^j gamma^k psi / psi^+ psi.  For an
    antiparticle spinor the bilinear itself comes out opposite to the
    particle one, so no extra sign is applied.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.shape[-1] != 4:
        raise DimensionMismatch("spin_vector needs a 4-component spinor")
    rho = _normalizer(psi, eps)
    s = np.stack([bilinear(psi, op).real for op in SPIN_OPERATORS], axis=-1)
    return s / rho[..., None]


def total_spin(psi, eps: float = DENSITY_FLOOR) -> np.ndarray:
    s = spin_vector(psi, eps)
    return np.sqrt(np.sum(s * s, axis=-1))


def helicity(psi, direction, eps: float = DENSITY_FLOOR) -> np.ndarray:
    """<n . sigma> / psi^+ psi for a 2-spinor; +1 or -1 for pure helicity states."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape[-1] != 2:
        raise DimensionMismatch("helicity needs a 2-component spinor")
    rho = _normalizer(psi, eps)
    n_sigma = np.einsum("k,kij->ij", direction.unit, PAULI[1:])
    return bilinear(psi, n_sigma).real / rho


def spin_closed_form(direction, f, g, species: str = PARTICLE) -> np.ndarray:
    """Closed-form spin of the Dirac families: +-(1/2) n (f^2 - g^2)/(f^2 + g^2)."""
    if species not in (PARTICLE, ANTIPARTICLE):
        raise ValueError(f"unknown species {species!r}")
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    ratio = (f * f - g * g) / (f * f + g * g)
    sign = 1.0 if species == PARTICLE else -1.0
    return sign * 0.5 * ratio[..., None] * direction.unit


def total_spin_closed_form(f, g) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    return 0.5 * np.abs((f * f - g * g) / (f * f + g * g))
