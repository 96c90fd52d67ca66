# aco/config.py
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from typing import Optional

import numpy as np

from kinetics.types import RATE_NAMES


# stall budget used by the presets
PRESET_RESTARTS = 8


def derive_new_states(population_size: int) -> int:
    """Q = floor(P / 2) + 1."""
    return population_size // 2 + 1


@dataclass(frozen=True)
class AcoConfig:
    """Hyperparameters of the continuous ant colony search.

    population_size (P), new_states (Q, derived from P when omitted), q (rank
    weight spread), xi (kernel width scale), max_iter, conv_tol (largest
    per-coordinate spread of the population that counts as converged), bounds
    (one (low, high) pair per rate), threshold (reported rates below it are
    zeroed), v_b (blood fraction of the kidney ROI), shared_init (every run of
    an ensemble starts from the same population), workers (ensemble processes),
    restarts (collapses in a row without progress before a run stops; 0 stops
    at the first collapse).
    """

    population_size: int = 13
    new_states: Optional[int] = None
    q: float = 0.015
    xi: float = 0.4
    max_iter: int = 2000
    conv_tol: float = 1e-4
    bounds: tuple = ((0.0, 1.0),) * len(RATE_NAMES)
    threshold: float = 1e-3
    v_b: float = 0.0
    shared_init: bool = False
    workers: int = 1
    restarts: int = 0

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError(f"population_size must be >= 2, got {self.population_size}")
        if self.new_states is None:
            object.__setattr__(self, "new_states", derive_new_states(self.population_size))
        if self.new_states < 1:
            raise ValueError(f"new_states must be >= 1, got {self.new_states}")
        for name in ("q", "xi", "conv_tol", "threshold"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if not 0.0 <= self.v_b < 1.0:
            raise ValueError(f"v_b must be in [0, 1), got {self.v_b}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.restarts < 0:
            raise ValueError(f"restarts must be >= 0, got {self.restarts}")

        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        if len(bounds) != len(RATE_NAMES):
            raise ValueError(f"expected {len(RATE_NAMES)} bounds, got {len(bounds)}")
        for name, (lo, hi) in zip(RATE_NAMES, bounds):
            if lo < 0 or not hi > lo or not math.isfinite(hi):
                raise ValueError(f"bounds for {name} must satisfy 0 <= low < high, got ({lo}, {hi})")
        object.__setattr__(self, "bounds", bounds)

    # -----------------------------
    # Presets
    # -----------------------------
    @classmethod
    def synthetic(cls, **changes) -> "AcoConfig":
        """Settings used for the simulated experiments."""
        return cls(**{**dict(population_size=13, q=0.015, xi=0.4, v_b=0.0, restarts=PRESET_RESTARTS), **changes})

    @classmethod
    def real_data(cls, **changes) -> "AcoConfig":
        """Settings used for ROI measurements: wider box, blood fraction 0.2."""
        defaults = dict(
            population_size=25,
            q=0.0001,
            xi=0.65,
            v_b=0.2,
            restarts=PRESET_RESTARTS,
            bounds=((0.0, 5.0),) * len(RATE_NAMES),
        )
        return cls(**{**defaults, **changes})

    def updated(self, **changes) -> "AcoConfig":
        """replace() that re-derives Q when P changes and Q is not given."""
        if "population_size" in changes and "new_states" not in changes:
            changes["new_states"] = None
        return replace(self, **changes)

    @property
    def lower(self) -> np.ndarray:
        return np.array([lo for lo, _ in self.bounds])

    @property
    def upper(self) -> np.ndarray:
        return np.array([hi for _, hi in self.bounds])

    def as_dict(self) -> dict:
        data = asdict(self)
        data["bounds"] = [list(pair) for pair in self.bounds]
        return data
