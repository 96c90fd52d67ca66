# aco/__init__.py
"""
Inverse problem: rate constants from kidney/bladder curves by ant colony search.
"""

from .colony import (
    FitResult,
    Population,
    aco_iterate,
    init_population,
    kernel_widths,
    rank_log_weights,
    rank_weights,
    reseed,
    run_aco,
)
from .config import AcoConfig, derive_new_states
from .cost import CostFunction, blood_correction, cost
from .ensemble import EnsembleResult, ensemble, summarize
