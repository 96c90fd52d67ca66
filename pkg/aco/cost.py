# aco/cost.py
"""Discrepancy between model and measured kidney/bladder curves.

    cost = sum_frames ((C_t + C_p) - C_exp)^2 + sum_frames (C_u - C_u_meas)^2
    C_exp = (C_kidney - V_b C_b) / (1 - V_b)
"""
from __future__ import annotations

import math

import numpy as np

from kinetics.errors import LengthMismatchError, NonFiniteError
from kinetics.synth import MeasurementSet, input_function, sample_model
from kinetics.types import RateConstants

from .config import AcoConfig


def blood_correction(kidney, blood, v_b: float) -> np.ndarray:
    """Remove the blood-fraction contribution from a kidney ROI series."""
    kidney = np.asarray(kidney, dtype=float)
    blood = np.asarray(blood, dtype=float)
    if kidney.shape != blood.shape:
        raise LengthMismatchError(
            f"kidney has {kidney.size} samples but blood has {blood.size}"
        )
    if not 0.0 <= v_b < 1.0:
        raise ValueError(f"v_b must be in [0, 1), got {v_b}")
    return (kidney - v_b * blood) / (1.0 - v_b)


class CostFunction:
    """cost(k) for one data set; the input function is built once."""

    def __init__(self, data: MeasurementSet, config: AcoConfig):
        self.data = data
        self.eps = config.threshold
        self.tac = input_function(data.schedule, data.blood)
        self.kidney_target = blood_correction(data.kidney, data.blood, config.v_b)
        self.bladder_target = np.asarray(data.bladder, dtype=float)
        self.evaluations = 0

    def curves(self, k: RateConstants):
        """Model (C_t + C_p, C_u) at the frame times."""
        return sample_model(k, self.tac, self.data.times, self.eps)

    def __call__(self, k) -> float:
        if not isinstance(k, RateConstants):
            k = RateConstants.from_array(k)
        kidney, bladder = self.curves(k)
        self.evaluations += 1
        value = float(
            np.sum((kidney - self.kidney_target) ** 2)
            + np.sum((bladder - self.bladder_target) ** 2)
        )
        if not math.isfinite(value):
            raise NonFiniteError(f"cost is not finite for {k}")
        return value


def cost(k: RateConstants, data: MeasurementSet, config: AcoConfig) -> float:
    return CostFunction(data, config)(k)
