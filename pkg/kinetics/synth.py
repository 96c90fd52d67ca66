# kinetics/synth.py
"""Synthetic experiments and measurement containers.

A gamma-variate input drives the analytic solution, which is read off at
acquisition-frame midpoints and corrupted with Poisson noise. Real ROI data
share the same MeasurementSet container.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import InvalidScheduleError, LengthMismatchError, NegativeValueError, ZeroVolumeError
from .solvers import solve_direct
from .types import STRUCTURAL_TOL, RateConstants, SampledCurve, TimeGrid, _frozen_array

logger = logging.getLogger(__name__)

# Uniform steps of the internal evaluation grid spanning [0, last frame].
EVAL_STEPS = 2000
# Poisson counts per kBq/mL used when no scale is given.
DEFAULT_NOISE_SCALE = 1e3


# -----------------------------
# Input function
# -----------------------------
@dataclass(frozen=True)
class GammaVariateParams:
    """C_b(t) = A (t - t0)^alpha exp(-(t - t0) / beta) for t > t0."""

    amplitude: float = 10.0
    t0: float = 0.2
    alpha: float = 2.0
    beta: float = 1.5

    def __post_init__(self):
        for name in ("amplitude", "t0", "alpha", "beta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"gamma variate {name} must be finite")
        if self.amplitude < 0:
            raise ValueError(f"amplitude must be >= 0, got {self.amplitude}")
        if self.t0 < 0:
            raise ValueError(f"t0 must be >= 0, got {self.t0}")
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be > 0")

    @property
    def peak_time(self) -> float:
        return self.t0 + self.alpha * self.beta

    def evaluate(self, times) -> np.ndarray:
        t = np.asarray(times, dtype=float)
        shifted = np.clip(t - self.t0, 0.0, None)
        return self.amplitude * shifted ** self.alpha * np.exp(-shifted / self.beta)


def gamma_variate_tac(p: GammaVariateParams, grid: TimeGrid) -> SampledCurve:
    return SampledCurve(grid, p.evaluate(grid.times))


# -----------------------------
# Acquisition schedule and measurements
# -----------------------------
@dataclass(frozen=True, eq=False)
class AcquisitionSchedule:
    """Frame midpoint times in minutes."""

    times: np.ndarray

    def __post_init__(self):
        try:
            times = _frozen_array(self.times, "frame times")
        except ValueError as e:
            raise InvalidScheduleError(str(e)) from e
        if times.size < 1:
            raise InvalidScheduleError("schedule needs at least one frame")
        if times[0] <= 0:
            raise InvalidScheduleError(f"frame times must be positive, got {times[0]}")
        if np.any(np.diff(times) <= 0):
            raise InvalidScheduleError("frame times must be strictly increasing")
        object.__setattr__(self, "times", times)

    @classmethod
    def from_durations(cls, durations) -> "AcquisitionSchedule":
        ends = np.cumsum(np.asarray(durations, dtype=float))
        return cls(ends - np.asarray(durations, dtype=float) / 2.0)

    @classmethod
    def default(cls) -> "AcquisitionSchedule":
        """27 frames: 10 x 0.5 min, 8 x 1 min, 9 x 4 min (49 min total)."""
        return cls.from_durations([0.5] * 10 + [1.0] * 8 + [4.0] * 9)

    def __len__(self):
        return self.times.size

    def __eq__(self, other):
        if not isinstance(other, AcquisitionSchedule):
            return NotImplemented
        return np.array_equal(self.times, other.times)

    __hash__ = None


def _optional_array(values, name, n):
    if values is None:
        return None
    arr = _frozen_array(values, name)
    if arr.size != n:
        raise LengthMismatchError(f"{name} has {arr.size} values for {n} frames")
    if np.any(arr < 0):
        raise NegativeValueError(f"{name} contains negative values")
    return arr


@dataclass(frozen=True, eq=False)
class MeasurementSet:
    """Kidney, bladder and blood concentrations (kBq/mL) per frame."""

    schedule: AcquisitionSchedule
    kidney: np.ndarray
    bladder: np.ndarray
    blood: np.ndarray
    kidney_err: Optional[np.ndarray] = None
    bladder_err: Optional[np.ndarray] = None

    def __post_init__(self):
        n = len(self.schedule)
        for name in ("kidney", "bladder", "blood", "kidney_err", "bladder_err"):
            object.__setattr__(self, name, _optional_array(getattr(self, name), name, n))
        for name in ("kidney", "bladder", "blood"):
            if getattr(self, name) is None:
                raise ValueError(f"{name} is required")

    @property
    def times(self) -> np.ndarray:
        return self.schedule.times

    def __len__(self):
        return len(self.schedule)

    def __eq__(self, other):
        if not isinstance(other, MeasurementSet):
            return NotImplemented
        if self.schedule != other.schedule:
            return False
        for name in ("kidney", "bladder", "blood", "kidney_err", "bladder_err"):
            mine, theirs = getattr(self, name), getattr(other, name)
            if (mine is None) != (theirs is None):
                return False
            if mine is not None and not np.array_equal(mine, theirs):
                return False
        return True

    __hash__ = None


def input_function(schedule: AcquisitionSchedule, blood, steps: int = EVAL_STEPS) -> SampledCurve:
    """Piecewise-linear C_b on the uniform evaluation grid, with C_b(0) = 0."""
    knots_t = np.concatenate([[0.0], schedule.times])
    knots_v = np.concatenate([[0.0], np.asarray(blood, dtype=float)])
    grid = TimeGrid.uniform(float(schedule.times[-1]), steps)
    return SampledCurve(grid, np.interp(grid.times, knots_t, knots_v))


def sample_model(k: RateConstants, tac: SampledCurve, frame_times, eps: float = STRUCTURAL_TOL):
    """Model (C_t + C_p, C_u) at the frame times."""
    conc = solve_direct(k, tac, eps)
    grid = conc.grid.times
    return np.interp(frame_times, grid, conc.kidney), np.interp(frame_times, grid, conc.c_u.values)


# -----------------------------
# Simulation
# -----------------------------
def _poisson(values, noise_scale, rng):
    if noise_scale == 0:
        return np.array(values, dtype=float)
    # clip guards tiny negative round-off in the model curves
    lam = np.clip(values, 0.0, None) * noise_scale
    return rng.poisson(lam) / noise_scale


def simulate_measurements(
    k: RateConstants,
    p: GammaVariateParams,
    schedule: AcquisitionSchedule,
    noise_scale: float = DEFAULT_NOISE_SCALE,
    seed=None,
    blood_fraction: float = 0.0,
) -> MeasurementSet:
    """Noisy kidney and bladder samples; blood samples stay exact.

    The kidney signal is (1 - V_b)(C_t + C_p) + V_b C_b, so the default
    blood_fraction of 0 gives plain C_t + C_p.
    """
    if not isinstance(schedule, AcquisitionSchedule):
        raise InvalidScheduleError("schedule must be an AcquisitionSchedule")
    if not (noise_scale >= 0 and math.isfinite(noise_scale)):
        raise ValueError(f"noise_scale must be finite and >= 0, got {noise_scale}")
    if not 0.0 <= blood_fraction < 1.0:
        raise ValueError(f"blood_fraction must be in [0, 1), got {blood_fraction}")
    rng = np.random.default_rng(seed)

    blood = p.evaluate(schedule.times)
    tac = input_function(schedule, blood)
    kidney, bladder = sample_model(k, tac, schedule.times)
    if blood_fraction:
        kidney = (1.0 - blood_fraction) * kidney + blood_fraction * blood
    logger.debug("simulated %d frames, noise scale %g, seed %s", len(schedule), noise_scale, seed)
    return MeasurementSet(
        schedule=schedule,
        kidney=_poisson(kidney, noise_scale, rng),
        bladder=_poisson(bladder, noise_scale, rng),
        blood=blood,
    )


# -----------------------------
# Error bars for ROI data
# -----------------------------
def error_bars(concentration, volume: float, scale: float = 1.0):
    """Poisson standard deviation of the ROI activity, back in concentration units.

    activity = concentration * volume * scale (counts); sd = sqrt(activity).
    """
    norm = volume * scale
    if norm == 0:
        raise ZeroVolumeError("volume and count scale must be nonzero")
    if volume < 0 or scale < 0:
        raise ValueError("volume and scale must be >= 0")
    conc = np.asarray(concentration, dtype=float)
    if np.any(conc < 0):
        raise NegativeValueError("concentration must be >= 0")
    result = np.sqrt(conc * norm) / norm
    return float(result) if result.ndim == 0 else result


def attach_error_bars(
    data: MeasurementSet, kidney_volume: float, bladder_volume: float, scale: float = 1.0
) -> MeasurementSet:
    return replace(
        data,
        kidney_err=error_bars(data.kidney, kidney_volume, scale),
        bladder_err=error_bars(data.bladder, bladder_volume, scale),
    )
