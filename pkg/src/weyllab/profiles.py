"""Scalar shape functions with hand-coded derivatives.

One-dimensional profiles supply the envelopes f, g and the phase h of the
comoving coordinate; two-dimensional profiles supply the transverse
distribution p(x, y).  Every profile returns exact derivatives so that the
potentials and fields built on top of them carry no differentiation error.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import simpson
from scipy.special import erf

from weyllab.errors import QuadratureError


class NonNormalizableWarning(UserWarning):
    """Envelope has a nonzero tail, so its spinor cannot be normalized."""


def _positive(name: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be positive and finite, got {value!r}")


def _finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class Direction:
    """Propagation direction given by polar angle theta and azimuth phi."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        _finite("theta", self.theta)
        _finite("phi", self.phi)
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta!r}")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi must lie in [0, 2pi), got {self.phi!r}")

    @property
    def unit(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])


PLUS_Z = Direction(0.0, 0.0)
MINUS_Z = Direction(math.pi, 0.0)


class Event(NamedTuple):
    """Spacetime point (natural units).  Fields may be arrays of equal shape."""

    t: object = 0.0
    x: object = 0.0
    y: object = 0.0
    z: object = 0.0

    def shifted(self, axis: int, delta: float) -> "Event":
        coords = list(self)
        coords[axis] = coords[axis] + delta
        return Event(*coords)


def w_coordinate(direction: Direction, e: Event):
    """Comoving coordinate n . r - t."""
    nx, ny, nz = direction.unit
    return nx * e.x + ny * e.y + nz * e.z - e.t


# ---------------------------------------------------------------------------
# one-dimensional profiles


@dataclass(frozen=True)
class Constant:
    A: float = 1.0
    kind = "constant"

    def __post_init__(self):
        _finite("A", self.A)

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        return np.full_like(w, self.A), np.zeros_like(w)

    @property
    def square_integrable(self) -> bool:
        return self.A == 0


@dataclass(frozen=True)
class Gaussian:
    A: float = 1.0
    k: float = 1.0
    w0: float = 0.0
    kind = "gaussian"

    def __post_init__(self):
        _finite("A", self.A)
        _positive("k", self.k)
        _finite("w0", self.w0)

    def __call__(self, w):
        d = np.asarray(w, dtype=float) - self.w0
        v = self.A * np.exp(-self.k * d * d)
        return v, -2.0 * self.k * d * v

    square_integrable = True


@dataclass(frozen=True)
class OffsetGaussian:
    """B + A exp(-k (w - w0)^2); not normalizable unless B == 0."""

    B: float = 0.0
    A: float = 1.0
    k: float = 1.0
    w0: float = 0.0
    kind = "offset-gaussian"

    def __post_init__(self):
        _finite("B", self.B)
        _finite("A", self.A)
        _positive("k", self.k)
        _finite("w0", self.w0)

    def __call__(self, w):
        v, dv = Gaussian(self.A, self.k, self.w0)(w)
        return self.B + v, dv

    @property
    def square_integrable(self) -> bool:
        return self.B == 0


@dataclass(frozen=True)
class GaussianSum:
    """Sum of Gaussians, one (A, k, w0) triple per localization site."""

    terms: tuple = ((1.0, 1.0, 0.0),)
    kind = "sum-of-gaussians"

    def __post_init__(self):
        terms = tuple(tuple(float(c) for c in term) for term in self.terms)
        if not terms:
            raise ValueError("terms must not be empty")
        for i, term in enumerate(terms):
            if len(term) != 3:
                raise ValueError(f"terms[{i}] must be (A, k, w0), got {term!r}")
            Gaussian(*term)
        object.__setattr__(self, "terms", terms)

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        value = np.zeros_like(w)
        deriv = np.zeros_like(w)
        for term in self.terms:
            v, dv = Gaussian(*term)(w)
            value = value + v
            deriv = deriv + dv
        return value, deriv

    square_integrable = True


@dataclass(frozen=True)
class ErfChirp:
    """Phase sqrt(pi/lam) (E0/2) erf(sqrt(lam)(w - w0)).

    Its derivative, the local energy, is the Gaussian E0 exp(-lam (w - w0)^2).
    """

    E0: float = 1.0
    lam: float = 1.0
    w0: float = 0.0
    kind = "erf-chirp"

    def __post_init__(self):
        _positive("E0", self.E0)
        _positive("lambda", self.lam)
        _finite("w0", self.w0)

    def __call__(self, w):
        d = np.asarray(w, dtype=float) - self.w0
        root = math.sqrt(self.lam)
        value = math.sqrt(math.pi / self.lam) * 0.5 * self.E0 * erf(root * d)
        return value, self.E0 * np.exp(-self.lam * d * d)

    square_integrable = False


@dataclass(frozen=True)
class LinearPhase:
    """h = E w, the free plane-wave phase of energy E."""

    E: float = 1.0
    kind = "linear-phase"

    def __post_init__(self):
        _finite("E", self.E)

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        return self.E * w, np.full_like(w, self.E)

    @property
    def square_integrable(self) -> bool:
        return self.E == 0


PROFILE1D_KINDS = {
    cls.kind: cls for cls in (Constant, Gaussian, OffsetGaussian, GaussianSum, ErfChirp, LinearPhase)
}


def eval1d(profile, w):
    """(value, derivative) of a one-dimensional profile at ``w``."""
    return profile(w)


def norm_integral(profile, lo: float, hi: float, nodes: int = 64, rtol: float = 1e-8, max_nodes: int = 1 << 22):
    """Integral of value^2 over [lo, hi] by composite Simpson with node doubling.

    Warns with :class:`NonNormalizableWarning` when the profile has a
    nonzero tail; raises :class:`QuadratureError` if doubling does not
    converge before ``max_nodes``.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if nodes < 16:
        raise ValueError("nodes must be at least 16")
    if not profile.square_integrable:
        warnings.warn(
            f"{profile.kind} profile is not square integrable; the integral grows with the interval",
            NonNormalizableWarning,
            stacklevel=2,
        )

    def rule(n):
        w = np.linspace(lo, hi, n + 1)
        return simpson(profile(w)[0] ** 2, x=w)

    n = nodes + nodes % 2
    previous = rule(n)
    while n < max_nodes:
        n *= 2
        current = rule(n)
        if abs(current - previous) <= rtol * abs(current) or current == previous:
            return float(current)
        previous = current
    raise QuadratureError(f"norm integral did not converge with {n} nodes")


# ---------------------------------------------------------------------------
# two-dimensional transverse profiles


class Profile2DValue(NamedTuple):
    value: np.ndarray
    dx: np.ndarray
    dy: np.ndarray
    dxx: np.ndarray
    dyy: np.ndarray


@dataclass(frozen=True)
class SuperGaussian:
    """A exp(-k1 (x - x0)^(2 n1) - k2 (y - y0)^(2 n2))."""

    A: float = 1.0
    k1: float = 1.0
    k2: float = 1.0
    n1: int = 1
    n2: int = 1
    x0: float = 0.0
    y0: float = 0.0
    kind = "super-gaussian"

    def __post_init__(self):
        _positive("A", self.A)
        _positive("k1", self.k1)
        _positive("k2", self.k2)
        for name in ("n1", "n2"):
            n = getattr(self, name)
            if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
                raise ValueError(f"{name} must be a positive integer, got {n!r}")
        _finite("x0", self.x0)
        _finite("y0", self.y0)

    def log_derivatives(self, x, y):
        """(d/dx, d/dy, d2/dx2, d2/dy2) of ln p."""
        X = np.asarray(x, dtype=float) - self.x0
        Y = np.asarray(y, dtype=float) - self.y0
        n1, n2 = int(self.n1), int(self.n2)
        lx = -2 * n1 * self.k1 * X ** (2 * n1 - 1)
        ly = -2 * n2 * self.k2 * Y ** (2 * n2 - 1)
        lxx = -2 * n1 * (2 * n1 - 1) * self.k1 * X ** (2 * n1 - 2)
        lyy = -2 * n2 * (2 * n2 - 1) * self.k2 * Y ** (2 * n2 - 2)
        return lx, ly, lxx, lyy

    def __call__(self, x, y) -> Profile2DValue:
        X = np.asarray(x, dtype=float) - self.x0
        Y = np.asarray(y, dtype=float) - self.y0
        lx, ly, lxx, lyy = self.log_derivatives(x, y)
        p = self.A * np.exp(-self.k1 * X ** (2 * int(self.n1)) - self.k2 * Y ** (2 * int(self.n2)))
        return Profile2DValue(p, p * lx, p * ly, p * (lxx + lx * lx), p * (lyy + ly * ly))

    @property
    def center(self):
        return (self.x0, self.y0)


@dataclass(frozen=True)
class Reciprocal:
    """r1 / p for a base transverse profile p."""

    base: object
    r1: float = 1.0
    kind = "reciprocal"

    def __post_init__(self):
        _positive("r1", self.r1)

    def __call__(self, x, y) -> Profile2DValue:
        b = self.base(x, y)
        p = b.value
        r = self.r1 / p
        return Profile2DValue(
            r,
            -r * b.dx / p,
            -r * b.dy / p,
            r * (2 * b.dx * b.dx - p * b.dxx) / (p * p),
            r * (2 * b.dy * b.dy - p * b.dyy) / (p * p),
        )

    def log_derivatives(self, x, y):
        # ln(r1/p) = ln r1 - ln p
        return tuple(-d for d in self.base.log_derivatives(x, y))

    @property
    def center(self):
        return self.base.center


@dataclass(frozen=True)
class Uniform:
    """Constant transverse profile."""

    A: float = 1.0
    kind = "uniform"

    def __post_init__(self):
        _positive("A", self.A)

    def __call__(self, x, y) -> Profile2DValue:
        shape = np.broadcast(np.asarray(x, dtype=float), np.asarray(y, dtype=float)).shape
        zero = np.zeros(shape)
        return Profile2DValue(np.full(shape, self.A), zero, zero, zero, zero)

    def log_derivatives(self, x, y):
        zero = np.zeros(np.broadcast(np.asarray(x, dtype=float), np.asarray(y, dtype=float)).shape)
        return zero, zero, zero, zero

    center = (0.0, 0.0)


def eval2d(profile, x, y) -> Profile2DValue:
    """(value, d/dx, d/dy, d2/dx2, d2/dy2) of a transverse profile."""
    return profile(x, y)
