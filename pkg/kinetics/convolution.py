# kinetics/convolution.py
"""Exponential convolution E(t) = int_0^t exp(lam (t - tau)) C_b(tau) dtau.

C_b is treated as piecewise linear between samples and each interval is
integrated in closed form, so the recursion

    E(t + h) = exp(lam h) E(t) + h [(phi1 - phi2) C_b(t) + phi2 C_b(t + h)]

is exact for the interpolant. On a uniform grid the recursion is a first
order IIR filter and runs through scipy.signal.lfilter.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.signal import lfilter
from scipy.special import exprel

from .errors import NonFiniteError
from .types import SampledCurve


def _phi2(z: np.ndarray) -> np.ndarray:
    """(e^z - 1 - z) / z^2, with its Taylor series near 0."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = np.abs(z) < 1e-3
    zs = z[small]
    out[small] = 0.5 + zs / 6.0 + zs * zs / 24.0 + zs ** 3 / 120.0
    zl = z[~small]
    out[~small] = (np.expm1(zl) - zl) / (zl * zl)
    return out


def exp_convolve(lam: float, tac: SampledCurve) -> SampledCurve:
    """Convolve exp(lam t) with the sampled input; E(0) = 0."""
    if not math.isfinite(lam):
        raise NonFiniteError(f"eigenvalue must be finite, got {lam}")
    times = tac.grid.times
    values = tac.values
    h = np.diff(times)
    z = lam * h
    with np.errstate(over="ignore", invalid="ignore"):
        phi1 = exprel(z)
        phi2 = _phi2(z)
        forcing = h * ((phi1 - phi2) * values[:-1] + phi2 * values[1:])
        decay = np.exp(z)

    out = np.zeros_like(values)
    if tac.grid.is_uniform():
        out[1:] = lfilter([1.0], [1.0, -decay[0]], forcing)
    else:
        acc = 0.0
        for i in range(h.size):
            acc = decay[i] * acc + forcing[i]
            out[i + 1] = acc

    if not np.all(np.isfinite(out)):
        raise NonFiniteError(f"convolution overflowed for lambda={lam}")
    return SampledCurve(tac.grid, out)


def cumulative_integral(curve: SampledCurve) -> SampledCurve:
    """Trapezoidal running integral, 0 at t = 0."""
    values = cumulative_trapezoid(curve.values, curve.grid.times, initial=0.0)
    return SampledCurve(curve.grid, values)
