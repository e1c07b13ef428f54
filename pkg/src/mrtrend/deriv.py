"""Finite-difference derivatives of a uniformly sampled series."""
from __future__ import annotations

import enum

import numpy as np


class DerivRule(str, enum.Enum):
    THREE_POINT = "three_point"
    FIVE_POINT = "five_point"

    @property
    def min_length(self) -> int:
        return 3 if self is DerivRule.THREE_POINT else 5


def differentiate(series, dt: float, rule=DerivRule.THREE_POINT) -> np.ndarray:
    """Central differences inside, one-sided stencils of the same order at the ends.

    Three-point is second order, five-point fourth order. The output has the
    same length as the input.
    """
    rule = DerivRule(rule)
    f = np.asarray(series, dtype=np.float64)
    n = f.shape[0]
    if f.ndim != 1 or n < rule.min_length:
        raise ValueError(f"{rule.value} rule needs at least {rule.min_length} samples")
    if not dt > 0:
        raise ValueError("dt must be > 0")
    d = np.empty(n)
    if rule is DerivRule.THREE_POINT:
        d[1:-1] = (f[2:] - f[:-2]) / (2.0 * dt)
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt)
        d[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * dt)
        return d
    h12 = 12.0 * dt
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / h12
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / h12
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / h12
    d[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / h12
    d[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / h12
    return d
