# kinetics/reference.py
"""Fixed-step classical RK4 integration of the three-compartment ODEs.

Used as an independent oracle for the closed forms and as the fallback where
they break down (repeated or zero eigenvalues). C_b is linearly interpolated
between its samples; every sample interval is split into `refine` RK4 steps
so the input is smooth inside each step.
"""
from __future__ import annotations

import numpy as np

from .errors import NonFiniteError
from .types import ConcentrationSet, RateConstants, SampledCurve

REFINEMENT = 8


def ode_reference(
    k: RateConstants, tac: SampledCurve, refine: int = REFINEMENT
) -> ConcentrationSet:
    if refine < 1:
        raise ValueError(f"refine must be >= 1, got {refine}")
    times = tac.grid.times
    values = tac.values
    a = k.k_bt + k.k_pt
    b = k.k_tp
    c = k.k_pt
    d = k.k_tp + k.k_up
    k_up, k_tb, k_pb = k.k_up, k.k_tb, k.k_pb

    def rhs(ct, cp, cb):
        return (
            -a * ct + b * cp + k_tb * cb,
            c * ct - d * cp + k_pb * cb,
            k_up * cp,
        )

    n = times.size
    out = np.zeros((3, n))
    ct = cp = cu = 0.0
    for i in range(n - 1):
        span = float(times[i + 1] - times[i])
        v0 = float(values[i])
        slope = (float(values[i + 1]) - v0) / span
        h = span / refine
        for j in range(refine):
            s = j * h
            cb0 = v0 + slope * s
            cbm = v0 + slope * (s + 0.5 * h)
            cb1 = v0 + slope * (s + h)
            k1 = rhs(ct, cp, cb0)
            k2 = rhs(ct + 0.5 * h * k1[0], cp + 0.5 * h * k1[1], cbm)
            k3 = rhs(ct + 0.5 * h * k2[0], cp + 0.5 * h * k2[1], cbm)
            k4 = rhs(ct + h * k3[0], cp + h * k3[1], cb1)
            ct += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
            cp += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
            cu += h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        out[:, i + 1] = (ct, cp, cu)

    if not np.all(np.isfinite(out)):
        raise NonFiniteError("RK4 integration diverged")
    return ConcentrationSet.from_arrays(tac.grid, out[0], out[1], out[2])
