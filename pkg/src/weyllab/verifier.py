"""Finite-difference residuals, algebraic checks and field cross-checks.

Nothing here reuses the analytic derivatives of the solutions: every
derivative is taken by a central stencil on the closed-form spinor or on
the assembled potential, so the checks stay independent of what they check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from weyllab.algebra import GAMMA, PAULI, apply, slash2, slash4, spinor_norm
from weyllab.em_gauge import (
    ConstantGauge,
    Potential,
    TransverseBase,
    ZeroGauge,
    closed_form_fields,
    fields_from_potential,
    potential_for,
)
from weyllab.errors import DimensionMismatch, FloorDominated
from weyllab.fd import FDSpec, gradient4
from weyllab.parallel import pmap
from weyllab.profiles import Event
from weyllab.solutions import DiracSolution, WeylTransverseSolution

RESIDUAL_THRESHOLD = 1e-6
FIELD_THRESHOLD = 1e-7
ROUNDING_FLOOR = 1e-13
NEGATIVE_CONTROL_FACTOR = 1e3

# Operator matrices per equation.  The negative-helicity Weyl equation
# carries -2 i sigma^0 d_0 and -2 a_0 sigma^0, i.e. a flipped time component.
_WEYL_MINUS = np.array([-PAULI[0], PAULI[1], PAULI[2], PAULI[3]])
OPERATORS = {"dirac": GAMMA, "weyl+": PAULI, "weyl-": _WEYL_MINUS}


@dataclass(frozen=True)
class Grid:
    """Axis-aligned box of ``points`` samples per axis around ``center``."""

    center: tuple = (0.0, 0.0, 0.0, 0.0)
    half_width: tuple = (1.0, 1.0, 1.0, 1.0)
    points: int = 6

    def __post_init__(self):
        if self.points < 1:
            raise ValueError("grid needs at least one point per axis")
        hw = self.half_width
        if np.ndim(hw) == 0:
            hw = (float(hw),) * 4
        object.__setattr__(self, "half_width", tuple(float(h) for h in hw))
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))

    def axes(self) -> list:
        if self.points == 1:
            return [np.array([c]) for c in self.center]
        return [np.linspace(c - h, c + h, self.points) for c, h in zip(self.center, self.half_width)]

    def events(self) -> Event:
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return Event(*(m.ravel() for m in mesh))

    def describe(self) -> dict:
        return {
            "center": list(self.center),
            "half_width": list(self.half_width),
            "points_per_axis": self.points,
            "total_points": self.points**4,
        }


def localization_center(sol) -> tuple:
    """Event (t = 0) on the envelope peak of ``sol``."""
    w0 = _profile_center(sol.f)
    if isinstance(sol, WeylTransverseSolution):
        x0, y0 = sol.p.center
        return (0.0, float(x0), float(y0), w0)
    nx, ny, nz = sol.direction.unit
    return (0.0, nx * w0, ny * w0, nz * w0)


def _profile_center(profile) -> float:
    if hasattr(profile, "w0"):
        return float(profile.w0)
    if hasattr(profile, "terms"):
        return float(np.mean([term[2] for term in profile.terms]))
    return 0.0


def localization_grid(sol, points: int = 6, half_width: float = 1.0) -> Grid:
    return Grid(localization_center(sol), half_width, points)


@dataclass
class ResidualReport:
    max_norm: float
    mean_norm: float
    grid: dict
    fd: FDSpec
    threshold: float
    passed: bool
    convergence_order_estimate: float | None = None
    baseline_max: float | None = None
    label: str = ""
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "label": self.label,
            "max_norm": self.max_norm,
            "mean_norm": self.mean_norm,
            "grid": self.grid,
            "fd": self.fd.as_dict(),
            "threshold": self.threshold,
            "pass": self.passed,
            "convergence_order_estimate": self.convergence_order_estimate,
        }
        if self.baseline_max is not None:
            out["baseline_max"] = self.baseline_max
        out.update(self.details)
        return out


# ---------------------------------------------------------------------------
# residuals


def residual_spinor(field_fn, equation: str, potential, e: Event, fd: FDSpec, m: float = 0.0):
    """Spinor-valued residual i S^mu d_mu psi + b_mu S^mu psi - m psi."""
    ops = OPERATORS[equation]
    psi = np.asarray(field_fn(e))
    out = np.zeros_like(psi, dtype=complex)
    for mu, d in enumerate(gradient4(field_fn, e, fd)):
        out = out + 1j * apply(ops[mu], d)
    if potential is not None:
        b = potential(e)
        out = out + apply(np.einsum("...m,mij->...ij", b, ops), psi)
    if m:
        out = out - m * psi
    return out


def dirac_residual(sol: DiracSolution, pot, m: float, e: Event, fd: FDSpec = FDSpec()) -> np.ndarray:
    """Pointwise norm of the Dirac residual; ``pot=None`` means zero potential."""
    return spinor_norm(residual_spinor(sol, "dirac", pot, e, fd, m))


def weyl_residual(sol, pot, e: Event, fd: FDSpec = FDSpec(), helicity: int | None = None) -> np.ndarray:
    """Pointwise norm of the Weyl residual for the equation of ``helicity``.

    Defaults to the solution's own helicity.
    """
    hel = sol.helicity if helicity is None else helicity
    return spinor_norm(residual_spinor(sol, "weyl+" if hel == 1 else "weyl-", pot, e, fd))


def residual(sol, pot, e: Event, fd: FDSpec = FDSpec(), m: float = 0.0) -> np.ndarray:
    if sol.equation == "dirac":
        return dirac_residual(sol, pot, m, e, fd)
    if m:
        raise ValueError("the Weyl equations carry no mass term")
    return weyl_residual(sol, pot, e, fd)


def annihilator_residual(psi, v, helicity: int | None = None) -> np.ndarray:
    """Norm of (v_mu S^mu) psi; the Weyl matrices follow ``helicity``."""
    psi = np.asarray(psi, dtype=complex)
    v = np.asarray(v, dtype=float)
    if psi.shape[-1] == 4:
        return spinor_norm(apply(slash4(v), psi))
    if psi.shape[-1] == 2:
        if helicity not in (1, -1):
            raise ValueError("a 2-spinor annihilator check needs helicity +1 or -1")
        if helicity == 1:
            mat = slash2(v)
        else:
            mat = np.einsum("...m,mij->...ij", v, _WEYL_MINUS)
        return spinor_norm(apply(mat, psi))
    raise DimensionMismatch(f"spinor with {psi.shape[-1]} components")


def residual_report(sol, pot, grid: Grid, fd: FDSpec = FDSpec(), m: float = 0.0,
                    threshold: float = RESIDUAL_THRESHOLD, label: str = "residual") -> ResidualReport:
    r = residual(sol, pot, grid.events(), fd, m)
    mx = float(np.max(r))
    return ResidualReport(mx, float(np.mean(r)), grid.describe(), fd, threshold, mx <= threshold, label=label)


def degeneracy_sweep(sol, gauges, grid: Grid, fd: FDSpec = FDSpec(), threshold: float = RESIDUAL_THRESHOLD,
                     m: float = 0.0, annihilator_override=None, label: str = "degeneracy") -> ResidualReport:
    """Max residual over every gauge sample and grid point, plus the s = 0 baseline."""
    gauges = list(gauges)
    if not gauges:
        raise ValueError("degeneracy sweep needs at least one gauge function")
    events = grid.events()

    def one(gauge):
        r = residual(sol, potential_for(sol, gauge, annihilator_override), events, fd, m)
        return float(np.max(r)), float(np.mean(r))

    per_sample = pmap(one, gauges)
    baseline = float(np.max(residual(sol, potential_for(sol), events, fd, m)))
    mx = max(s[0] for s in per_sample)
    mean = sum(s[1] for s in per_sample) / len(per_sample)
    return ResidualReport(
        mx, mean, grid.describe(), fd, threshold, mx <= threshold,
        baseline_max=baseline, label=label,
        details={"samples": len(gauges), "per_sample_max": [s[0] for s in per_sample]},
    )


def convergence_order(residual_fn, steps) -> float:
    """Least-squares slope of log(residual) against log(step)."""
    steps = [float(h) for h in steps]
    if len(steps) < 3:
        raise ValueError("need at least three steps")
    values = [float(residual_fn(h)) for h in steps]
    if min(values) < ROUNDING_FLOOR:
        raise FloorDominated(values)
    slope, _ = np.polyfit(np.log(steps), np.log(values), 1)
    return float(slope)


def grid_convergence_order(sol, pot, grid: Grid, order: int, steps, m: float = 0.0) -> float:
    events = grid.events()
    return convergence_order(lambda h: np.max(residual(sol, pot, events, FDSpec(order, h), m)), steps)


def field_crosscheck(sol, gauge, q: float, grid: Grid, fd: FDSpec = FDSpec(),
                     threshold: float = FIELD_THRESHOLD, label: str = "fields") -> ResidualReport:
    """Componentwise max |closed form - finite-difference| for E and B."""
    events = grid.events()
    exact = closed_form_fields(sol, gauge, q, events)
    numeric = fields_from_potential(potential_for(sol, gauge), q, events, fd)
    diff = np.concatenate([np.abs(exact.E - numeric.E), np.abs(exact.B - numeric.B)], axis=-1)
    per_point = np.max(diff, axis=-1)
    mx = float(np.max(per_point))
    return ResidualReport(mx, float(np.mean(per_point)), grid.describe(), fd, threshold, mx <= threshold, label=label)


# ---------------------------------------------------------------------------
# negative controls


def negative_controls(sol, grid: Grid, fd: FDSpec = FDSpec(), threshold: float = RESIDUAL_THRESHOLD,
                      mass: float = 0.5) -> list:
    """Deliberately broken inputs; each must land far above ``threshold``."""
    events = grid.events()
    flipped = np.concatenate([[1.0], sol.direction.unit])
    cases = [("flipped_annihilator", lambda: residual(sol, potential_for(sol, ConstantGauge(1.0), flipped), events, fd))]
    if sol.equation == "dirac":
        cases.append((f"mass_{mass:g}", lambda: residual(sol, potential_for(sol), events, fd, mass)))
    elif isinstance(sol, WeylTransverseSolution):
        cases.append(("zero_potential", lambda: residual(sol, None, events, fd)))
        wrong = Potential(potential_for(sol).annihilator, ZeroGauge(),
                          TransverseBase(-sol.helicity, sol.sense, sol.p))
        cases.append(("wrong_helicity_potential", lambda: residual(sol, wrong, events, fd)))
    else:
        cases.append(("wrong_helicity_equation",
                      lambda: weyl_residual(sol, potential_for(sol), events, fd, -sol.helicity)))
    out = []
    for name, run in cases:
        mx = float(np.max(run()))
        out.append({
            "name": name,
            "max_residual": mx,
            "threshold": threshold,
            "required": NEGATIVE_CONTROL_FACTOR * threshold,
            "detected": bool(mx >= NEGATIVE_CONTROL_FACTOR * threshold),
        })
    return out


def order_estimate_or_none(sol, pot, grid: Grid, fd: FDSpec, m: float = 0.0):
    """(slope or None, floor_dominated, residuals) over steps 4h, 2h, h."""
    h = fd.steps[0]
    steps = [4 * h, 2 * h, h]
    try:
        return grid_convergence_order(sol, pot, grid, fd.order, steps, m), False, steps
    except FloorDominated:
        return None, True, steps

