"""Smoothers that estimate the expected-value path m(t) from one observed path."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.signal import lfilter

from . import _backend
from .sde import Gamma

SmootherKind = Literal["hodrick_prescott", "moving_average", "exponential"]

_ALIASES = {
    "hp": "hodrick_prescott",
    "hodrick_prescott": "hodrick_prescott",
    "ma": "moving_average",
    "moving_average": "moving_average",
    "es": "exponential",
    "exponential": "exponential",
}


@dataclass(frozen=True)
class SmootherConfig:
    """Which smoother to run and its single tuning parameter.

    ``lam`` is the HP penalty, ``window`` the MA length, ``period`` the ES
    period length. Only the field belonging to ``kind`` may be set.
    """

    kind: SmootherKind = "hodrick_prescott"
    lam: float | None = None
    window: int | None = None
    period: int | None = None

    def __post_init__(self):
        try:
            kind = _ALIASES[str(self.kind).lower()]
        except KeyError:
            raise ValueError(f"unknown smoother kind {self.kind!r}") from None
        object.__setattr__(self, "kind", kind)
        needed = {"hodrick_prescott": "lam", "moving_average": "window",
                  "exponential": "period"}[kind]
        for name in ("lam", "window", "period"):
            value = getattr(self, name)
            if name == needed and value is None:
                raise ValueError(f"{kind} smoother requires {name!r}")
            if name != needed and value is not None:
                raise ValueError(f"{name!r} does not apply to the {kind} smoother")
        if kind == "hodrick_prescott" and not self.lam > 0:
            raise ValueError("lam must be > 0")
        if kind == "moving_average" and int(self.window) < 1:
            raise ValueError("window must be >= 1")
        if kind == "exponential" and int(self.period) < 1:
            raise ValueError("period must be >= 1")

    @classmethod
    def hp(cls, lam: float = 40000.0):
        return cls("hodrick_prescott", lam=float(lam))

    @classmethod
    def default_for(cls, gamma) -> "SmootherConfig":
        """HP with lam=40000 for additive noise, 400000 otherwise."""
        return cls.hp(40000.0 if Gamma.parse(gamma) is Gamma.ZERO else 400000.0)

    def apply(self, series) -> np.ndarray:
        if self.kind == "hodrick_prescott":
            return hp_filter(series, self.lam)
        if self.kind == "moving_average":
            return moving_average(series, int(self.window))
        return exponential_smoothing(series, int(self.period))

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        for name in ("lam", "window", "period"):
            if getattr(self, name) is not None:
                d[name] = getattr(self, name)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SmootherConfig":
        return cls(d.get("kind", "hodrick_prescott"), lam=d.get("lam"),
                   window=d.get("window"), period=d.get("period"))


def _as_series(series) -> np.ndarray:
    x = np.ascontiguousarray(series, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("expected a 1-D series")
    return x


def hp_filter(series, lam: float) -> np.ndarray:
    """Hodrick-Prescott trend: solves ``(I + lam D'D) tau = x`` in O(n)."""
    x = _as_series(series)
    if x.shape[0] < 4:
        raise ValueError("HP filter needs at least 4 observations")
    if not lam > 0:
        raise ValueError("lam must be > 0")
    return _backend.hp_solve(x, float(lam))


def moving_average(series, window: int) -> np.ndarray:
    """Centered moving average with truncated windows at both ends.

    Even windows lean left: ``ceil((w-1)/2)`` points before, ``floor((w-1)/2)``
    after.
    """
    x = _as_series(series)
    n = x.shape[0]
    if window < 1:
        raise ValueError("window must be >= 1")
    if window > n:
        raise ValueError(f"window {window} exceeds series length {n}")
    left = window // 2
    right = (window - 1) // 2
    idx = np.arange(n)
    lo = np.maximum(idx - left, 0)
    hi = np.minimum(idx + right, n - 1) + 1
    csum = np.concatenate(([0.0], np.cumsum(x)))
    return (csum[hi] - csum[lo]) / (hi - lo)


def exponential_smoothing(series, period: int) -> np.ndarray:
    """Simple exponential smoothing, weight ``2 / (period + 1)``, seeded at x_0."""
    x = _as_series(series)
    if period < 1:
        raise ValueError("period must be >= 1")
    if x.shape[0] == 0:
        return x.copy()
    beta = 2.0 / (period + 1.0)
    out, _ = lfilter([beta], [1.0, beta - 1.0], x, zi=[(1.0 - beta) * x[0]])
    return out
