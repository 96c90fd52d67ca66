# kinetics/types.py
"""Value types of the three-compartment renal model.

Compartments: t (tissue/parenchyma), p (pre-urine), u (bladder urine), with
the blood input b. A rate k_ab carries tracer to compartment a from b.
All types are frozen; arrays are copied and made read-only on construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from enum import Enum

import numpy as np

from .errors import InvalidGridError, LengthMismatchError, NegativeRateError, NonFiniteError

# Column order used everywhere rates are tabulated.
RATE_NAMES = ("k_bt", "k_tp", "k_pt", "k_up", "k_tb", "k_pb")

# Rates at or below this value count as "effectively zero" (1/min).
STRUCTURAL_TOL = 1e-3


def _frozen_array(values, name):
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


# -----------------------------
# Rate constants and matrix form
# -----------------------------
@dataclass(frozen=True)
class RateConstants:
    """The six exchange coefficients, 1/min."""

    k_bt: float
    k_tp: float
    k_pt: float
    k_up: float
    k_tb: float
    k_pb: float

    def __post_init__(self):
        for f in fields(self):
            value = float(getattr(self, f.name))
            if not math.isfinite(value):
                raise NonFiniteError(f"{f.name} must be finite, got {value}")
            if value < 0:
                raise NegativeRateError(f"{f.name} must be >= 0, got {value}")
            object.__setattr__(self, f.name, value)

    @classmethod
    def from_array(cls, values) -> "RateConstants":
        values = list(values)
        if len(values) != len(RATE_NAMES):
            raise LengthMismatchError(f"expected {len(RATE_NAMES)} rates, got {len(values)}")
        return cls(*values)

    @classmethod
    def zeros(cls) -> "RateConstants":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in RATE_NAMES], dtype=float)

    def as_dict(self) -> dict:
        return {n: getattr(self, n) for n in RATE_NAMES}

    def thresholded(self, threshold: float) -> "RateConstants":
        """Copy with every rate below `threshold` set to exactly 0."""
        arr = self.as_array()
        arr[arr < threshold] = 0.0
        return RateConstants.from_array(arr)


@dataclass(frozen=True)
class KineticMatrix:
    """Reduced parameters of A = [[-a, b], [c, -d]]."""

    a: float
    b: float
    c: float
    d: float

    @property
    def determinant(self) -> float:
        return self.a * self.d - self.b * self.c

    def as_matrix(self) -> np.ndarray:
        return np.array([[-self.a, self.b], [self.c, -self.d]])


class CaseKind(Enum):
    FULL = "full"
    LOWER_TRIANGULAR = "lower"
    UPPER_TRIANGULAR = "upper"
    DIAGONAL = "diagonal"


@dataclass(frozen=True)
class EigenPair:
    lambda1: float
    lambda2: float


# -----------------------------
# Sampled time series
# -----------------------------
@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Strictly increasing times in minutes starting at 0."""

    times: np.ndarray

    def __post_init__(self):
        times = _frozen_array(self.times, "times")
        if times.size < 2:
            raise InvalidGridError("a time grid needs at least 2 points")
        if times[0] != 0.0:
            raise InvalidGridError(f"a time grid must start at 0, got {times[0]}")
        steps = np.diff(times)
        if np.any(steps <= 0):
            raise InvalidGridError("grid times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "_uniform", bool(np.allclose(steps, steps[0], rtol=1e-9, atol=0.0)))

    @classmethod
    def uniform(cls, t_end: float, n_steps: int) -> "TimeGrid":
        return cls(np.linspace(0.0, t_end, n_steps + 1))

    def __len__(self):
        return self.times.size

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def is_uniform(self) -> bool:
        return self._uniform


@dataclass(frozen=True, eq=False)
class SampledCurve:
    """Concentration values (kBq/mL) on a TimeGrid."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        values = _frozen_array(self.values, "values")
        if values.size != len(self.grid):
            raise LengthMismatchError(
                f"curve has {values.size} values for a grid of {len(self.grid)} times"
            )
        object.__setattr__(self, "values", values)

    @property
    def times(self) -> np.ndarray:
        return self.grid.times


@dataclass(frozen=True, eq=False)
class ConcentrationSet:
    """Tissue, pre-urine and bladder curves on a shared grid."""

    c_t: SampledCurve
    c_p: SampledCurve
    c_u: SampledCurve

    def __post_init__(self):
        if not (self.c_t.grid is self.c_p.grid is self.c_u.grid):
            ref = self.c_t.times
            for curve in (self.c_p, self.c_u):
                if curve.times.shape != ref.shape or np.any(curve.times != ref):
                    raise LengthMismatchError("concentration curves must share one grid")

    @property
    def grid(self) -> TimeGrid:
        return self.c_t.grid

    @property
    def kidney(self) -> np.ndarray:
        """C_t + C_p, the signal a kidney ROI sees (without blood)."""
        return self.c_t.values + self.c_p.values

    @classmethod
    def from_arrays(cls, grid: TimeGrid, c_t, c_p, c_u) -> "ConcentrationSet":
        return cls(SampledCurve(grid, c_t), SampledCurve(grid, c_p), SampledCurve(grid, c_u))

    def stacked(self) -> np.ndarray:
        """(3, n) array of C_t, C_p, C_u."""
        return np.vstack([self.c_t.values, self.c_p.values, self.c_u.values])
