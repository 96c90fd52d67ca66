# kinetics/__init__.py
"""
Direct problem of the renal three-compartment model and synthetic data.
"""

from .convolution import cumulative_integral, exp_convolve
from .reference import ode_reference
from .solvers import (
    classify,
    derive_matrix,
    eigenvalues,
    solve_diagonal,
    solve_direct,
    solve_full,
    solve_lower,
    solve_upper,
)
from .types import (
    RATE_NAMES,
    STRUCTURAL_TOL,
    CaseKind,
    ConcentrationSet,
    EigenPair,
    KineticMatrix,
    RateConstants,
    SampledCurve,
    TimeGrid,
)
from .synth import (
    AcquisitionSchedule,
    GammaVariateParams,
    MeasurementSet,
    attach_error_bars,
    error_bars,
    gamma_variate_tac,
    input_function,
    sample_model,
    simulate_measurements,
)
