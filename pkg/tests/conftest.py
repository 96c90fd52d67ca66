import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from kinetics import (  # noqa: E402
    AcquisitionSchedule,
    GammaVariateParams,
    TimeGrid,
    gamma_variate_tac,
    simulate_measurements,
)
from utils.config import DEFAULT_TRUTH  # noqa: E402


@pytest.fixture
def schedule():
    return AcquisitionSchedule.default()


@pytest.fixture
def reference_tac(schedule):
    """Default gamma variate on a uniform grid over the acquisition."""
    grid = TimeGrid.uniform(float(schedule.times[-1]), 1000)
    return gamma_variate_tac(GammaVariateParams(), grid)


@pytest.fixture
def noiseless_data(schedule):
    return simulate_measurements(DEFAULT_TRUTH, GammaVariateParams(), schedule, noise_scale=0)


@pytest.fixture
def noisy_data(schedule):
    return simulate_measurements(DEFAULT_TRUTH, GammaVariateParams(), schedule, seed=42)
