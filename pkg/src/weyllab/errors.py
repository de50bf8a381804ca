"""Exception types shared across the package."""

from __future__ import annotations


class WeylLabError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(WeylLabError, ValueError):
    pass


class DegenerateDensity(WeylLabError, ArithmeticError):
    """Probability density too small to normalize a bilinear."""


class ProfileNonpositive(WeylLabError, ValueError):
    """A transverse profile was zero or negative where it is divided by."""


class ZeroCharge(WeylLabError, ZeroDivisionError):
    pass


class FloorDominated(WeylLabError):
    """Residuals sit at the rounding floor, so no convergence slope exists."""

    def __init__(self, residuals):
        self.residuals = list(residuals)
        super().__init__(f"residuals at rounding floor: {self.residuals}")


class QuadratureError(WeylLabError):
    pass


class ConfigError(WeylLabError):
    """Config parse or validation failure, located by file, line and key."""

    def __init__(self, message: str, path=None, line: int | None = None, key: str | None = None):
        self.path = path
        self.line = line
        self.key = key
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        if key is not None:
            where += f"[{key}] "
        super().__init__(where + message)
