"""Central finite-difference stencils on closed-form fields."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from weyllab.profiles import Event

# offsets and weights; the sum is divided by h
_STENCILS = {
    2: ((1, 0.5), (-1, -0.5)),
    4: ((2, -1.0 / 12), (1, 8.0 / 12), (-1, -8.0 / 12), (-2, 1.0 / 12)),
}


@dataclass(frozen=True)
class FDSpec:
    """Stencil order (2 or 4) and step per coordinate (t, x, y, z)."""

    order: int = 4
    step: float | tuple = 0.01

    def __post_init__(self):
        if self.order not in _STENCILS:
            raise ValueError(f"order must be 2 or 4, got {self.order!r}")
        steps = self.steps
        if any(not (np.isfinite(h) and h > 0) for h in steps):
            raise ValueError(f"steps must be positive, got {self.step!r}")

    @property
    def steps(self) -> tuple:
        if np.ndim(self.step) == 0:
            return (float(self.step),) * 4
        steps = tuple(float(h) for h in self.step)
        if len(steps) != 4:
            raise ValueError("need one step per coordinate (t, x, y, z)")
        return steps

    @property
    def width(self) -> int:
        return self.order + 1

    def as_dict(self) -> dict:
        return {"order": self.order, "step": list(self.steps)}


def partial(fn, e: Event, axis: int, fd: FDSpec):
    """d fn / d x^axis at ``e``; fn maps an Event to an array."""
    h = fd.steps[axis]
    total = None
    for offset, weight in _STENCILS[fd.order]:
        term = weight * np.asarray(fn(e.shifted(axis, offset * h)))
        total = term if total is None else total + term
    return total / h


def gradient4(fn, e: Event, fd: FDSpec) -> list:
    """[d_t fn, d_x fn, d_y fn, d_z fn]."""
    return [partial(fn, e, axis, fd) for axis in range(4)]
