"""Closed-form spinor families of the massless Dirac and Weyl equations.

All solutions are evaluable at any event, including array-valued events,
so finite-difference stencils can sample them off-grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from weyllab.profiles import (
    MINUS_Z,
    PLUS_Z,
    Constant,
    Direction,
    Event,
    LinearPhase,
    w_coordinate,
)

PARTICLE = "particle"
ANTIPARTICLE = "antiparticle"


def _check_sign(name: str, value: int) -> int:
    if value not in (1, -1):
        raise ValueError(f"{name} must be +1 or -1, got {value!r}")
    return int(value)


def _half_angle_columns(direction: Direction):
    c = math.cos(direction.theta / 2)
    s = math.sin(direction.theta / 2)
    eip = complex(math.cos(direction.phi), math.sin(direction.phi))
    return c, s, eip


@dataclass(frozen=True)
class DiracSolution:
    """Massless Dirac spinor built from envelopes f, g and phase h of w."""

    species: str = PARTICLE
    direction: Direction = PLUS_Z
    f: object = field(default_factory=lambda: Constant(1.0))
    g: object = field(default_factory=lambda: Constant(0.0))
    h: object = field(default_factory=lambda: LinearPhase(1.0))

    equation = "dirac"

    def __post_init__(self):
        if self.species not in (PARTICLE, ANTIPARTICLE):
            raise ValueError(f"species must be particle or antiparticle, got {self.species!r}")

    def columns(self):
        """The two constant 4-spinors multiplying f and g."""
        c, s, eip = _half_angle_columns(self.direction)
        up = np.array([c, eip * s, c, eip * s])
        if self.species == PARTICLE:
            return up, np.array([-s, eip * c, s, -eip * c])
        return np.array([s, -eip * c, -s, eip * c]), up

    def phase_coordinate(self, e: Event):
        return w_coordinate(self.direction, e)

    def __call__(self, e: Event) -> np.ndarray:
        w = self.phase_coordinate(e)
        fv = self.f(w)[0]
        gv = self.g(w)[0]
        phase = np.exp(1j * self.h(w)[0])
        cf, cg = self.columns()
        return (fv[..., None] * cf + gv[..., None] * cg) * phase[..., None]


@dataclass(frozen=True)
class WeylDirectionalSolution:
    """Weyl spinor of definite helicity travelling along ``direction``."""

    helicity: int = 1
    direction: Direction = PLUS_Z
    f: object = field(default_factory=lambda: Constant(1.0))
    h: object = field(default_factory=lambda: LinearPhase(1.0))

    def __post_init__(self):
        _check_sign("helicity", self.helicity)

    @property
    def equation(self) -> str:
        return "weyl+" if self.helicity == 1 else "weyl-"

    def column(self) -> np.ndarray:
        c, s, eip = _half_angle_columns(self.direction)
        if self.helicity == 1:
            return np.array([c, eip * s])
        return np.array([-s, eip * c])

    def phase_coordinate(self, e: Event):
        return w_coordinate(self.direction, e)

    def __call__(self, e: Event) -> np.ndarray:
        w = self.phase_coordinate(e)
        amp = self.f(w)[0] * np.exp(1j * self.h(w)[0])
        return amp[..., None] * self.column()


@dataclass(frozen=True)
class WeylTransverseSolution:
    """p(x, y) f(zeta) exp(i h(zeta)) times a fixed unit spinor.

    ``sense`` is +1 for motion along +z (zeta = z - t) and -1 for motion
    along -z (zeta = z + t).  The unit spinor is (1, 0) when helicity and
    sense agree and (0, 1) otherwise.
    """

    helicity: int = 1
    sense: int = 1
    p: object = None
    f: object = field(default_factory=lambda: Constant(1.0))
    h: object = field(default_factory=lambda: LinearPhase(1.0))

    def __post_init__(self):
        _check_sign("helicity", self.helicity)
        _check_sign("sense", self.sense)
        if self.p is None:
            raise ValueError("transverse solution needs a profile p")

    @property
    def equation(self) -> str:
        return "weyl+" if self.helicity == 1 else "weyl-"

    @property
    def direction(self) -> Direction:
        return PLUS_Z if self.sense == 1 else MINUS_Z

    def column(self) -> np.ndarray:
        if self.helicity == self.sense:
            return np.array([1.0 + 0j, 0.0])
        return np.array([0.0, 1.0 + 0j])

    def phase_coordinate(self, e: Event):
        return e.z - self.sense * e.t

    def __call__(self, e: Event) -> np.ndarray:
        zeta = self.phase_coordinate(e)
        amp = self.p(e.x, e.y).value * self.f(zeta)[0] * np.exp(1j * self.h(zeta)[0])
        return amp[..., None] * self.column()


def eval_dirac(sol: DiracSolution, e: Event) -> np.ndarray:
    return sol(e)


def eval_weyl_directional(sol: WeylDirectionalSolution, e: Event) -> np.ndarray:
    return sol(e)


def eval_weyl_transverse(sol: WeylTransverseSolution, e: Event) -> np.ndarray:
    return sol(e)


def local_phase_energy(sol, e: Event):
    """dh/dw (or dh/dzeta) at the event: the local particle energy."""
    return sol.h(sol.phase_coordinate(e))[1]


def event_on_axis(sol, u):
    """Event at t = 0 where the phase coordinate equals ``u``.

    Directional families move along their direction; transverse families
    sit on the profile center line.
    """
    u = np.asarray(u, dtype=float)
    if isinstance(sol, WeylTransverseSolution):
        x0, y0 = sol.p.center
        return Event(np.zeros_like(u), np.full_like(u, x0), np.full_like(u, y0), u)
    nx, ny, nz = sol.direction.unit
    return Event(np.zeros_like(u), nx * u, ny * u, nz * u)
