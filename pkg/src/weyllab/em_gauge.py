"""Degenerate 4-potential families and their electromagnetic fields.

A solution stays a solution under b_mu = a_mu + s(r, t) v_mu, where a_mu
is its base potential, s an arbitrary real gauge function and v_mu the
annihilator vector whose contraction with the gamma (or Pauli) matrices
kills the spinor pointwise.  Fields follow from U = b0/q and
A = -(b1, b2, b3)/q.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from weyllab.algebra import PAULI, bilinear
from weyllab.errors import ProfileNonpositive, ZeroCharge
from weyllab.fd import FDSpec, gradient4
from weyllab.observables import DENSITY_FLOOR, _normalizer
from weyllab.profiles import Direction, Event
from weyllab.solutions import WeylTransverseSolution

# ---------------------------------------------------------------------------
# gauge functions s(r, t)


def _zeros(e: Event):
    return np.zeros(np.broadcast(*(np.asarray(c, dtype=float) for c in e)).shape)


@dataclass(frozen=True)
class ZeroGauge:
    kind = "zero"

    def __call__(self, e: Event):
        return _zeros(e)

    def gradient(self, e: Event):
        """(s_t, s_x, s_y, s_z) stacked on the last axis."""
        z = _zeros(e)
        return np.stack([z, z, z, z], axis=-1)


@dataclass(frozen=True)
class ConstantGauge:
    s0: float = 1.0
    kind = "constant"

    def __call__(self, e: Event):
        return _zeros(e) + self.s0

    def gradient(self, e: Event):
        return ZeroGauge().gradient(e)


@dataclass(frozen=True)
class PolynomialGauge:
    """Sum of c * t^a x^b y^c z^d with total degree at most 3.

    ``terms`` is a tuple of ((a, b, c, d), coefficient) pairs.
    """

    terms: tuple = ()
    kind = "polynomial"
    MAX_DEGREE = 3

    def __post_init__(self):
        merged: dict = {}
        for powers, coeff in self.terms:
            powers = tuple(int(k) for k in powers)
            if len(powers) != 4 or min(powers) < 0:
                raise ValueError(f"exponents must be four non-negative integers, got {powers!r}")
            if sum(powers) > self.MAX_DEGREE:
                raise ValueError(f"total degree {sum(powers)} exceeds {self.MAX_DEGREE}")
            if not math.isfinite(coeff):
                raise ValueError("polynomial coefficients must be finite")
            merged[powers] = merged.get(powers, 0.0) + float(coeff)
        object.__setattr__(self, "terms", tuple(sorted(merged.items())))

    def __call__(self, e: Event):
        out = _zeros(e)
        for powers, coeff in self.terms:
            term = coeff
            for coord, k in zip(e, powers):
                term = term * np.asarray(coord, dtype=float) ** k
            out = out + term
        return out

    def gradient(self, e: Event):
        parts = []
        for axis in range(4):
            out = _zeros(e)
            for powers, coeff in self.terms:
                if powers[axis] == 0:
                    continue
                term = coeff * powers[axis]
                for i, (coord, k) in enumerate(zip(e, powers)):
                    kk = k - 1 if i == axis else k
                    term = term * np.asarray(coord, dtype=float) ** kk
                out = out + term
            parts.append(out)
        return np.stack(parts, axis=-1)


@dataclass(frozen=True)
class SinusoidGauge:
    """s0 sin(kx x + ky y + kz z - omega t + phase)."""

    s0: float = 1.0
    kx: float = 0.0
    ky: float = 0.0
    kz: float = 0.0
    omega: float = 0.0
    phase: float = 0.0
    kind = "sinusoid"

    def _argument(self, e: Event):
        return self.kx * e.x + self.ky * e.y + self.kz * e.z - self.omega * e.t + self.phase

    def __call__(self, e: Event):
        return _zeros(e) + self.s0 * np.sin(self._argument(e))

    def gradient(self, e: Event):
        c = _zeros(e) + self.s0 * np.cos(self._argument(e))
        return np.stack([-self.omega * c, self.kx * c, self.ky * c, self.kz * c], axis=-1)


@dataclass(frozen=True)
class SumGauge:
    parts: tuple = ()
    kind = "sum"

    def __call__(self, e: Event):
        out = _zeros(e)
        for part in self.parts:
            out = out + part(e)
        return out

    def gradient(self, e: Event):
        out = ZeroGauge().gradient(e)
        for part in self.parts:
            out = out + part.gradient(e)
        return out


def random_gauges(rng: np.random.Generator, count: int, wavenumber: float = 1.5) -> list:
    """Alternate random cubic polynomials and random plane-wave sinusoids."""
    monomials = [p for p in itertools.product(range(4), repeat=4) if sum(p) <= 3]
    gauges = []
    for i in range(count):
        if i % 2 == 0:
            chosen = rng.choice(len(monomials), size=6, replace=False)
            coeffs = rng.uniform(-1.0, 1.0, size=6)
            gauges.append(PolynomialGauge(tuple((monomials[j], float(c)) for j, c in zip(chosen, coeffs))))
        else:
            kx, ky, kz, omega = rng.uniform(-wavenumber, wavenumber, size=4)
            gauges.append(
                SinusoidGauge(
                    float(rng.uniform(0.5, 2.0)), float(kx), float(ky), float(kz), float(omega),
                    float(rng.uniform(0.0, 2 * math.pi)),
                )
            )
    return gauges


# ---------------------------------------------------------------------------
# annihilators and potentials


def annihilator(direction: Direction) -> np.ndarray:
    """(1, -n): the vector whose slashed form annihilates every family member."""
    nx, ny, nz = direction.unit
    return np.array([1.0, -nx, -ny, -nz])


def weyl_annihilator(psi, helicity: int, eps: float = DENSITY_FLOOR) -> np.ndarray:
    """Annihilator from spinor bilinears: (1, -+ psi^+ sigma^k psi / psi^+ psi).

    Upper sign for positive helicity.
    """
    psi = np.asarray(psi, dtype=complex)
    rho = _normalizer(psi, eps)
    sign = -1.0 if helicity == 1 else 1.0
    spatial = [sign * bilinear(psi, PAULI[k]).real / rho for k in (1, 2, 3)]
    return np.stack([np.ones_like(rho), *spatial], axis=-1)


def annihilator_for(sol) -> np.ndarray:
    return annihilator(sol.direction)


def _positive_profile(value):
    if np.any(~(value > 0)):
        raise ProfileNonpositive("transverse profile must be positive where evaluated")


def base_potential_transverse(helicity: int, sense: int, p, x, y) -> np.ndarray:
    """Base 4-potential of a transverse solution.

    (0, p_y/p, -p_x/p, 0) when helicity and sense agree, its negative otherwise.
    """
    pv = p(x, y)
    _positive_profile(pv.value)
    sign = 1.0 if helicity * sense == 1 else -1.0
    a1 = sign * pv.dy / pv.value
    a2 = -sign * pv.dx / pv.value
    zero = np.zeros_like(a1)
    return np.stack([zero, a1, a2, zero], axis=-1)


def degenerate_potential(base, v, s, e: Event) -> np.ndarray:
    """b = base + s(e) v, componentwise."""
    return np.asarray(base, dtype=float) + np.asarray(s(e))[..., None] * np.asarray(v, dtype=float)


@dataclass(frozen=True)
class TransverseBase:
    helicity: int
    sense: int
    p: object

    def __call__(self, e: Event) -> np.ndarray:
        return base_potential_transverse(self.helicity, self.sense, self.p, e.x, e.y)


@dataclass(frozen=True)
class Potential:
    """Assembled b_mu(e) = base(e) + s(e) v."""

    annihilator: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0, -1.0]))
    gauge: object = field(default_factory=ZeroGauge)
    base: object = None

    def __call__(self, e: Event) -> np.ndarray:
        if self.base is None:
            base = np.zeros(_zeros(e).shape + (4,))
        else:
            base = self.base(e)
        return degenerate_potential(base, self.annihilator, self.gauge, e)

    def __eq__(self, other):
        if not isinstance(other, Potential):
            return NotImplemented
        return (
            np.array_equal(self.annihilator, other.annihilator)
            and self.gauge == other.gauge
            and self.base == other.base
        )

    __hash__ = None


def base_for(sol):
    if isinstance(sol, WeylTransverseSolution):
        return TransverseBase(sol.helicity, sol.sense, sol.p)
    return None


def potential_for(sol, gauge=None, annihilator_override=None, with_base: bool = True) -> Potential:
    """The degenerate potential family member of ``sol`` selected by ``gauge``."""
    v = annihilator_for(sol) if annihilator_override is None else np.asarray(annihilator_override, float)
    return Potential(v, ZeroGauge() if gauge is None else gauge, base_for(sol) if with_base else None)


# ---------------------------------------------------------------------------
# fields


class EMField(NamedTuple):
    E: np.ndarray
    B: np.ndarray


def _charge(q: float) -> float:
    if q == 0:
        raise ZeroCharge("charge q must be nonzero")
    return float(q)


def fields_from_potential(potential, q: float, e: Event, fd: FDSpec = FDSpec()) -> EMField:
    """E = -grad(b0/q) + d_t(b1, b2, b3)/q and B = -curl(b1, b2, b3)/q by finite differences."""
    q = _charge(q)
    dt, dx, dy, dz = gradient4(potential, e, fd)
    E = np.stack([-dx[..., 0] + dt[..., 1], -dy[..., 0] + dt[..., 2], -dz[..., 0] + dt[..., 3]], axis=-1) / q
    curl = np.stack(
        [dy[..., 3] - dz[..., 2], dz[..., 1] - dx[..., 3], dx[..., 2] - dy[..., 1]],
        axis=-1,
    )
    return EMField(E, -curl / q)


def log_laplacian_term(p, x, y) -> np.ndarray:
    """(p_x^2 + p_y^2 - p (p_xx + p_yy)) / p^2, i.e. minus the Laplacian of ln p.

    Uses the profile's analytic ln p derivatives when it has them: the
    p-partial form cancels badly where |grad ln p| is large.
    """
    pv = p(x, y)
    _positive_profile(pv.value)
    log_derivatives = getattr(p, "log_derivatives", None)
    if log_derivatives is not None:
        _, _, lxx, lyy = log_derivatives(x, y)
        return -(lxx + lyy)
    gx = pv.dx / pv.value
    gy = pv.dy / pv.value
    return gx * gx + gy * gy - (pv.dxx / pv.value + pv.dyy / pv.value)


def closed_form_fields(sol, gauge, q: float, e: Event) -> EMField:
    """Analytic fields of the degenerate potential family of ``sol``.

    For a propagation direction n the gauge part gives
    E = -(grad s + s_t n)/q and B = (grad s x n)/q; transverse families add
    the profile term -+ (p_x^2 + p_y^2 - p lap p)/(q p^2) to B_z.
    """
    q = _charge(q)
    n = sol.direction.unit
    ds = gauge.gradient(e)
    st, grad = ds[..., 0], ds[..., 1:]
    E = -(grad + st[..., None] * n) / q
    B = np.cross(grad, n) / q
    if isinstance(sol, WeylTransverseSolution):
        sign = -1.0 if BRANCH[(sol.helicity, sol.sense)] == "minus" else 1.0
        B = B.copy()
        B[..., 2] += sign * log_laplacian_term(sol.p, e.x, e.y) / q
    return EMField(E, B)


# (helicity, sense) -> sign branch of the z-directed separation field
BRANCH = {
    (1, 1): "minus",
    (-1, -1): "minus",
    (-1, 1): "plus",
    (1, -1): "plus",
}


def _branch_sign(branch: str) -> float:
    if branch not in ("minus", "plus"):
        raise ValueError(f"branch must be 'minus' or 'plus', got {branch!r}")
    return -1.0 if branch == "minus" else 1.0


def separation_field(p, q: float, branch: str, x, y) -> np.ndarray:
    """B_z of the gauge-free transverse family on the chosen branch."""
    sign = _branch_sign(branch)
    q = _charge(q)
    return sign * log_laplacian_term(p, x, y) / q


def separation_field_supergaussian(A, k1, k2, n1, n2, x0, y0, q, branch, x, y) -> np.ndarray:
    """Closed-form separation field of a super-Gaussian profile (independent of A)."""
    for name, k in (("k1", k1), ("k2", k2)):
        if not k >= 0:
            raise ValueError(f"{name} must be non-negative, got {k!r}")
    for name, n in (("n1", n1), ("n2", n2)):
        if int(n) != n or n < 1:
            raise ValueError(f"{name} must be a positive integer, got {n!r}")
    n1, n2 = int(n1), int(n2)
    sign = -_branch_sign(branch)
    q = _charge(q)
    X = np.asarray(x, dtype=float) - x0
    Y = np.asarray(y, dtype=float) - y0
    poly = k1 * n1 * (1 - 2 * n1) * X ** (2 * (n1 - 1)) + k2 * n2 * (1 - 2 * n2) * Y ** (2 * (n2 - 1))
    return sign * 2.0 / q * poly
