# kinetics/solvers.py
"""Closed-form solutions of the direct problem.

    C_t' = -(k_bt + k_pt) C_t + k_tp C_p + k_tb C_b
    C_p' = k_pt C_t - (k_tp + k_up) C_p + k_pb C_b
    C_u' = k_up C_p,            C_t(0) = C_p(0) = C_u(0) = 0

The first two rows are C' = A C + K C_b with A = [[-a, b], [c, -d]]. The
solution is a combination of E_i = exp(lam_i t) * C_b, with a different
combination for each zero pattern of (b, c). C_u follows from

    int_0^t E_w = (E_w(t) - int_0^t C_b) / w.
"""
from __future__ import annotations

import logging
import math

from .convolution import cumulative_integral, exp_convolve
from .errors import DegenerateEigenvaluesError, NonFiniteError, ZeroEigenvalueError
from .reference import ode_reference
from .types import (
    STRUCTURAL_TOL,
    CaseKind,
    ConcentrationSet,
    EigenPair,
    KineticMatrix,
    RateConstants,
    SampledCurve,
)

logger = logging.getLogger(__name__)

# |lam1 - lam2| at or below this falls back to the numeric integrator
DEGENERACY_TOL = 1e-6
# |lam_i| at or below this falls back to the numeric integrator
ZERO_EIGENVALUE_TOL = 1e-9


# -----------------------------
# Matrix structure
# -----------------------------
def derive_matrix(k: RateConstants) -> KineticMatrix:
    return KineticMatrix(a=k.k_bt + k.k_pt, b=k.k_tp, c=k.k_pt, d=k.k_tp + k.k_up)


def classify(m: KineticMatrix, eps: float = STRUCTURAL_TOL) -> CaseKind:
    """Zero pattern of the off-diagonal entries, thresholded at eps."""
    if eps <= 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    b_on = m.b > eps
    c_on = m.c > eps
    if b_on and c_on:
        return CaseKind.FULL
    if c_on:
        return CaseKind.LOWER_TRIANGULAR
    if b_on:
        return CaseKind.UPPER_TRIANGULAR
    return CaseKind.DIAGONAL


def _full_eigenvalues(m: KineticMatrix) -> EigenPair:
    # (a-d)^2 + 4bc equals the textbook discriminant and cannot go negative
    disc = math.sqrt((m.a - m.d) ** 2 + 4.0 * m.b * m.c)
    lambda2 = (-(m.a + m.d) - disc) / 2.0
    # lam1 from the product of the roots avoids cancellation when it is near 0
    lambda1 = m.determinant / lambda2 if lambda2 != 0.0 else 0.0
    return EigenPair(lambda1, lambda2)


def eigenvalues(m: KineticMatrix, eps: float = STRUCTURAL_TOL) -> EigenPair:
    """Eigenvalues of A.

    In the full case lambda1 is the larger root. In the triangular and
    diagonal cases lambda1 = -a and lambda2 = -d regardless of magnitude.
    """
    for name in ("a", "b", "c", "d"):
        if not math.isfinite(getattr(m, name)):
            raise NonFiniteError(f"matrix entry {name} is not finite")
    if classify(m, eps) is CaseKind.FULL:
        return _full_eigenvalues(m)
    return EigenPair(-m.a, -m.d)


def _check_distinct(pair: EigenPair):
    if abs(pair.lambda1 - pair.lambda2) <= DEGENERACY_TOL:
        raise DegenerateEigenvaluesError(
            f"eigenvalues {pair.lambda1:.3g} and {pair.lambda2:.3g} coincide"
        )


def _check_nonzero(*lambdas: float):
    for lam in lambdas:
        if abs(lam) <= ZERO_EIGENVALUE_TOL:
            raise ZeroEigenvalueError(f"eigenvalue {lam:.3g} is zero")


def _assemble(tac, c_t, c_p, c_u) -> ConcentrationSet:
    return ConcentrationSet.from_arrays(tac.grid, c_t, c_p, c_u)


# -----------------------------
# The four closed forms
# -----------------------------
def solve_full(k: RateConstants, tac: SampledCurve) -> ConcentrationSet:
    """b != 0 and c != 0: eigenvector expansion of K."""
    m = derive_matrix(k)
    lam = _full_eigenvalues(m)
    _check_distinct(lam)
    _check_nonzero(lam.lambda1, lam.lambda2)
    l1, l2 = lam.lambda1, lam.lambda2

    denom = (m.a + l1) * (m.d + l2) - m.b * m.c
    if denom == 0.0:
        raise DegenerateEigenvaluesError("eigenvectors of A are not independent")
    c1 = (-m.c * k.k_tb + (m.d + l2) * k.k_pb) / denom
    c2 = ((m.a + l1) * k.k_tb - m.b * k.k_pb) / denom

    e1 = exp_convolve(l1, tac).values
    e2 = exp_convolve(l2, tac).values
    integral = cumulative_integral(tac).values

    c_t = c1 * m.b * e1 + c2 * (m.d + l2) * e2
    c_p = c1 * (m.a + l1) * e1 + c2 * m.c * e2
    w1 = c1 * (m.a + l1) / l1
    w2 = c2 * m.c / l2
    c_u = k.k_up * (w1 * (e1 - integral) + w2 * (e2 - integral))
    return _assemble(tac, c_t, c_p, c_u)


def solve_lower(k: RateConstants, tac: SampledCurve) -> ConcentrationSet:
    """b = 0: tissue feeds pre-urine, nothing flows back."""
    m = derive_matrix(k)
    l1, l2 = -m.a, -m.d
    _check_distinct(EigenPair(l1, l2))
    _check_nonzero(l1, l2)

    chi1 = k.k_tb / (l1 - l2)
    chi2 = k.k_pb - m.c * k.k_tb / (l1 - l2)

    e1 = exp_convolve(l1, tac).values
    e2 = exp_convolve(l2, tac).values
    integral = cumulative_integral(tac).values

    c_t = chi1 * (l1 - l2) * e1
    c_p = m.c * chi1 * e1 + chi2 * e2
    w1 = m.c * chi1 / l1
    w2 = chi2 / l2
    c_u = k.k_up * (w1 * (e1 - integral) + w2 * (e2 - integral))
    return _assemble(tac, c_t, c_p, c_u)


def solve_upper(k: RateConstants, tac: SampledCurve) -> ConcentrationSet:
    """c = 0: pre-urine feeds tissue, tissue never reaches pre-urine."""
    m = derive_matrix(k)
    l1, l2 = -m.a, -m.d
    _check_distinct(EigenPair(l1, l2))
    _check_nonzero(l2)

    sigma2 = k.k_pb / (l2 - l1)
    sigma1 = k.k_tb - m.b * sigma2

    e1 = exp_convolve(l1, tac).values
    e2 = exp_convolve(l2, tac).values
    integral = cumulative_integral(tac).values

    c_t = sigma1 * e1 + m.b * sigma2 * e2
    c_p = (l2 - l1) * sigma2 * e2
    c_u = k.k_up * (l2 - l1) * sigma2 * (e2 - integral) / l2
    return _assemble(tac, c_t, c_p, c_u)


def solve_diagonal(k: RateConstants, tac: SampledCurve) -> ConcentrationSet:
    """b = c = 0: two independent one-compartment systems."""
    m = derive_matrix(k)
    l1, l2 = -m.a, -m.d
    _check_nonzero(l2)

    e1 = exp_convolve(l1, tac).values
    e2 = exp_convolve(l2, tac).values
    integral = cumulative_integral(tac).values

    c_t = k.k_tb * e1
    c_p = k.k_pb * e2
    # reduces to k_pb (int C_b - E_2) when d = k_up exactly
    c_u = k.k_up * k.k_pb * (integral - e2) / m.d
    return _assemble(tac, c_t, c_p, c_u)


_SOLVERS = {
    CaseKind.FULL: solve_full,
    CaseKind.LOWER_TRIANGULAR: solve_lower,
    CaseKind.UPPER_TRIANGULAR: solve_upper,
    CaseKind.DIAGONAL: solve_diagonal,
}


def solve_direct(
    k: RateConstants, tac: SampledCurve, eps: float = STRUCTURAL_TOL
) -> ConcentrationSet:
    """Dispatch on the matrix case; integrate numerically where no closed form applies."""
    case = classify(derive_matrix(k), eps)
    try:
        return _SOLVERS[case](k, tac)
    except (DegenerateEigenvaluesError, ZeroEigenvalueError) as e:
        logger.debug("closed form unavailable for %s (%s); using RK4 reference", k, e)
        return ode_reference(k, tac)
