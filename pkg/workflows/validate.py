# workflows/validate.py
import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import pandas as pd
import streamlit as st

from kinetics import (
    CaseKind,
    KineticMatrix,
    RateConstants,
    SampledCurve,
    TimeGrid,
    cumulative_integral,
    eigenvalues,
    exp_convolve,
    gamma_variate_tac,
    ode_reference,
    solve_direct,
)
from utils.config import RunConfig

logger = logging.getLogger(__name__)

name = "Validate - Direct Solver"

# -----------------------------
# Tolerances
# -----------------------------
VALIDATION_STEPS = 1000
EIGEN_DRAWS = 10_000
ORACLE_TOL = 1e-4
C_U_TOL = 1e-3
IDENTITY_TOL = 1e-3
MASS_BALANCE_TOL = 1.0   # residual per step, in units of h^2 * max|rhs|
NONNEGATIVE_TOL = 1e-10
RATE_RANGE = (1e-3, 2.0)

# rates forced to zero for each matrix case
_ZERO_PATTERN = {
    CaseKind.FULL: (),
    CaseKind.LOWER_TRIANGULAR: ("k_tp",),
    CaseKind.UPPER_TRIANGULAR: ("k_pt",),
    CaseKind.DIAGONAL: ("k_tp", "k_pt"),
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.deviation <= self.tolerance)


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {"check": c.name, "deviation": c.deviation, "tolerance": c.tolerance, "passed": c.passed}
                for c in self.checks
            ]
        )


# -----------------------------
# Measures
# -----------------------------
def relative_sup(values, reference) -> float:
    """sup|values - reference| / sup|reference|; absolute when the reference is 0."""
    diff = float(np.max(np.abs(np.asarray(values) - np.asarray(reference))))
    scale = float(np.max(np.abs(reference)))
    return diff / scale if scale > 0 else diff


def random_rates(rng, case: CaseKind, low=RATE_RANGE[0], high=RATE_RANGE[1]) -> RateConstants:
    values = dict(zip(RateConstants.zeros().as_dict(), rng.uniform(low, high, size=6)))
    for rate in _ZERO_PATTERN[case]:
        values[rate] = 0.0
    return RateConstants(**values)


def mass_balance_residual(k: RateConstants, conc, tac: SampledCurve) -> float:
    """d/dt (C_t + C_p + C_u) = (k_tb + k_pb) C_b - k_bt C_t, checked step by step."""
    h = np.diff(tac.times)
    total = conc.c_t.values + conc.c_p.values + conc.c_u.values
    rhs = (k.k_tb + k.k_pb) * tac.values - k.k_bt * conc.c_t.values
    resid = np.abs(np.diff(total) - 0.5 * h * (rhs[1:] + rhs[:-1]))
    peak = float(np.max(np.abs(rhs)))
    if peak == 0:
        return float(np.max(resid))
    return float(np.max(resid)) / (float(np.max(h)) ** 2 * peak)


def c_u_residual(k: RateConstants, conc) -> float:
    """C_u against k_up times the running integral of C_p."""
    expected = cumulative_integral(conc.c_p).values * k.k_up
    return relative_sup(conc.c_u.values, expected)


def identity_residual(w: float, tac: SampledCurve) -> float:
    """int_0^t E_w against (E_w(t) - int_0^t C_b) / w."""
    e = exp_convolve(w, tac)
    lhs = cumulative_integral(e).values
    rhs = (e.values - cumulative_integral(tac).values) / w
    return relative_sup(lhs, rhs)


def eigenvalue_violations(rng, draws: int = EIGEN_DRAWS) -> int:
    """Count admissible matrices whose eigenvalues are not real and negative."""
    bad = 0
    for _ in range(draws):
        a, d = rng.uniform(*RATE_RANGE, size=2)
        b = rng.uniform(0.0, d)
        c = rng.uniform(0.0, a)
        if a * d <= b * c:
            continue
        pair = eigenvalues(KineticMatrix(a, b, c, d))
        if not (np.isfinite(pair.lambda1) and np.isfinite(pair.lambda2)):
            bad += 1
        elif pair.lambda1 >= 0 or pair.lambda2 >= 0:
            bad += 1
    return bad


# -----------------------------
# Check suite
# -----------------------------
def cmd_validate(config: RunConfig, solver: Optional[Callable] = None) -> ValidationReport:
    """Closed forms against RK4 plus the structural identities of the model.

    solver defaults to solve_direct; pass another to check it instead.
    """
    solver = solver or solve_direct
    rng = np.random.default_rng(config.seed)
    grid = TimeGrid.uniform(float(config.schedule.times[-1]), VALIDATION_STEPS)
    if config.zero_tac:
        tac = SampledCurve(grid, np.zeros(len(grid)))
    else:
        tac = gamma_variate_tac(config.gamma, grid)

    checks = []
    c_u_dev = mass_dev = negative_dev = 0.0
    for case in CaseKind:
        oracle_dev = 0.0
        for _ in range(config.validate_cases):
            k = random_rates(rng, case)
            conc = solver(k, tac)
            ref = ode_reference(k, tac)
            oracle_dev = max(
                oracle_dev,
                *(relative_sup(x, r) for x, r in zip(conc.stacked(), ref.stacked())),
            )
            c_u_dev = max(c_u_dev, c_u_residual(k, conc))
            mass_dev = max(mass_dev, mass_balance_residual(k, conc, tac))
            negative_dev = max(negative_dev, float(-np.min(conc.stacked())), 0.0)
        checks.append(CheckResult(f"oracle_{case.value}", oracle_dev, ORACLE_TOL))
        logger.info("oracle check, %s case: max relative deviation %.3g", case.value, oracle_dev)

    checks.append(CheckResult("mass_balance", mass_dev, MASS_BALANCE_TOL))
    checks.append(CheckResult("c_u_consistency", c_u_dev, C_U_TOL))
    checks.append(CheckResult("nonnegativity", negative_dev, NONNEGATIVE_TOL))

    identity_dev = max(identity_residual(-w, tac) for w in rng.uniform(*RATE_RANGE, size=5))
    checks.append(CheckResult("convolution_identity", identity_dev, IDENTITY_TOL))
    checks.append(CheckResult("eigenvalue_signs", float(eigenvalue_violations(rng)), 0.0))
    return ValidationReport(tuple(checks))


# -----------------------------
# STREAMLIT UI
# -----------------------------
def render():
    st.header("🧪 Validate — Closed Forms vs RK4 Reference")
    st.markdown(
        "Random rate constants for each matrix case are solved analytically and with the "
        "RK4 integrator; mass balance, C_u consistency and the convolution identity are checked too."
    )

    cases = st.number_input("Random draws per matrix case", min_value=1, max_value=200, value=20, key="val_cases")
    seed = st.number_input("Seed", min_value=0, value=0, step=1, key="val_seed")
    zero_tac = st.checkbox("Zero input function", value=False, key="val_zero")

    if st.button("Run checks", key="val_run"):
        try:
            config = RunConfig(mode="validate", validate_cases=int(cases), seed=int(seed), zero_tac=zero_tac)
            with st.spinner("Running checks..."):
                report = cmd_validate(config)
            st.dataframe(report.as_frame())
            if report.passed:
                st.success("✅ All checks passed")
            else:
                st.error("❌ Some checks failed")
        except Exception as e:
            st.error(f"❌ Error running checks: {e}")
