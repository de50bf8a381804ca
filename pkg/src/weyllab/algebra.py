"""Pauli and Dirac-representation gamma matrices, slashed contractions, bilinears.

Spinors are numpy arrays whose last axis holds the components, so a whole
grid of spinor values is handled by the same functions as a single one.
"""

from __future__ import annotations

import numpy as np

from weyllab.errors import DimensionMismatch

_I = 1j

PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -_I], [_I, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
PAULI.setflags(write=False)


def _dirac_gamma() -> np.ndarray:
    zero = np.zeros((2, 2), dtype=complex)
    out = np.empty((4, 4, 4), dtype=complex)
    out[0] = np.block([[PAULI[0], zero], [zero, -PAULI[0]]])
    for mu in (1, 2, 3):
        out[mu] = np.block([[zero, PAULI[mu]], [-PAULI[mu], zero]])
    return out


GAMMA = _dirac_gamma()
GAMMA.setflags(write=False)

# Minkowski metric, signature (+, -, -, -)
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


def _check_index(mu) -> int:
    if isinstance(mu, bool) or not isinstance(mu, (int, np.integer)) or not 0 <= mu <= 3:
        raise IndexError(f"Lorentz index must be 0..3, got {mu!r}")
    return int(mu)


def pauli(mu: int) -> np.ndarray:
    """sigma^mu, with sigma^0 the 2x2 identity."""
    return PAULI[_check_index(mu)].copy()


def gamma(mu: int) -> np.ndarray:
    """gamma^mu in the Dirac representation."""
    return GAMMA[_check_index(mu)].copy()


def _coefficients(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape[-1] != 4:
        raise DimensionMismatch(f"expected 4 coefficients, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("slash coefficients must be finite")
    return a


def slash4(a) -> np.ndarray:
    """a_mu gamma^mu = a0 g0 + a1 g1 + a2 g2 + a3 g3 (no metric factors).

    Broadcasts over leading axes of ``a``.
    """
    return np.einsum("...m,mij->...ij", _coefficients(a), GAMMA)


def slash2(a) -> np.ndarray:
    """a_mu sigma^mu, same index placement as :func:`slash4`."""
    return np.einsum("...m,mij->...ij", _coefficients(a), PAULI)


def apply(matrix, psi) -> np.ndarray:
    """Matrix-vector product broadcast over leading axes of both arguments."""
    matrix = np.asarray(matrix)
    psi = np.asarray(psi)
    if matrix.shape[-1] != psi.shape[-1]:
        raise DimensionMismatch(f"matrix {matrix.shape} cannot act on spinor {psi.shape}")
    return np.einsum("...ij,...j->...i", matrix, psi)


def bilinear(psi, gam) -> np.ndarray:
    """psi^dagger . gam . psi, complex, one value per spinor."""
    psi = np.asarray(psi, dtype=complex)
    gam = np.asarray(gam)
    n = psi.shape[-1]
    if gam.shape[-2:] != (n, n):
        raise DimensionMismatch(f"{n}-component spinor with {gam.shape[-2:]} matrix")
    return np.einsum("...i,...ij,...j->...", psi.conj(), gam, psi)


def spinor_norm(psi) -> np.ndarray:
    """Euclidean norm over the component axis."""
    psi = np.asarray(psi)
    return np.sqrt(np.sum(psi.real**2 + psi.imag**2, axis=-1))
