"""Periodic Fourier trend and the analytic expected value of the process.

The trend is the truncated cosine series

    mu(t) = sum_k a_k * cos(2*pi*k*t / P + phi_k)

with period ``P``. The expected value m(t) = E[X_t] solves
dm/dt = alpha * (mu(t) - m) and has a closed form per harmonic.
"""
from __future__ import annotations

import json
import math
from importlib import resources
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi


def wrap_phase(phi: float) -> float:
    """Map an angle to (-pi, pi]."""
    phi = math.remainder(float(phi), TWO_PI)
    if phi <= -math.pi:
        phi += TWO_PI
    return phi


@dataclass(frozen=True)
class Harmonic:
    """One cosine term ``a * cos(2*pi*k*t/P + phi)``.

    The constant term (``k == 0``) carries phase 0, or pi for a negative
    offset.
    """

    k: int
    a: float
    phi: float = 0.0

    def __post_init__(self):
        k = self.k
        if isinstance(k, float) and k.is_integer():
            k = int(k)
        if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
            raise ValueError(f"harmonic index must be an integer, got {self.k!r}")
        if k < 0:
            raise ValueError(f"harmonic index must be non-negative, got {k}")
        a = float(self.a)
        if not a >= 0.0 or not math.isfinite(a):
            raise ValueError(f"amplitude must be finite and >= 0, got {self.a!r}")
        phi = wrap_phase(self.phi)
        if k == 0 and phi not in (0.0, math.pi):
            if abs(phi) < 1e-12:
                phi = 0.0
            elif abs(abs(phi) - math.pi) < 1e-12:
                phi = math.pi
            else:
                raise ValueError("the k=0 harmonic must have phase 0 or pi")
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "phi", phi)


@dataclass(frozen=True)
class FourierTrend:
    """Ordered set of harmonics sharing a common period."""

    harmonics: tuple[Harmonic, ...]
    period: float = 1.0

    def __post_init__(self):
        hs = tuple(self.harmonics)
        if not hs:
            raise ValueError("a trend needs at least one harmonic")
        ks = [h.k for h in hs]
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise ValueError(f"harmonic indices must be strictly increasing, got {ks}")
        if not (self.period > 0 and math.isfinite(self.period)):
            raise ValueError(f"period must be positive, got {self.period!r}")
        object.__setattr__(self, "harmonics", hs)
        object.__setattr__(self, "period", float(self.period))

    @classmethod
    def from_triples(cls, triples: Iterable[Sequence[float]], period: float = 1.0):
        """Build from ``(k, a, phi)`` triples in any order."""
        hs = sorted((Harmonic(int(k), a, phi) for k, a, phi in triples), key=lambda h: h.k)
        return cls(tuple(hs), period)

    @classmethod
    def constant(cls, level: float, period: float = 1.0):
        return cls((Harmonic(0, abs(level), 0.0 if level >= 0 else math.pi),), period)

    @property
    def ks(self) -> np.ndarray:
        return np.array([h.k for h in self.harmonics], dtype=np.int64)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([h.a for h in self.harmonics])

    @property
    def phases(self) -> np.ndarray:
        return np.array([h.phi for h in self.harmonics])

    @property
    def angular_frequencies(self) -> np.ndarray:
        return TWO_PI * self.ks / self.period

    def __call__(self, t):
        return eval_trend(self, t)

    def with_period(self, period: float) -> "FourierTrend":
        return FourierTrend(self.harmonics, period)

    # -- serialization: a JSON array of {"k", "a", "phi"} objects --

    def to_records(self) -> list[dict]:
        return [{"k": h.k, "a": h.a, "phi": h.phi} for h in self.harmonics]

    def to_json(self) -> str:
        return json.dumps(self.to_records(), indent=2)

    @classmethod
    def from_records(cls, records: Iterable[dict], period: float = 1.0):
        return cls.from_triples(((r["k"], r["a"], r["phi"]) for r in records), period)

    @classmethod
    def from_json(cls, text: str, period: float = 1.0):
        return cls.from_records(json.loads(text), period)


@dataclass(frozen=True)
class ExpectedValueParams:
    """Reversion rate and initial expected value for m(t).

    Only ``alpha > 0`` is required here; existence and uniqueness of the
    SDE solution hold for any positive rate and volatility.
    """

    alpha: float
    m0: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha!r}")


def eval_trend(trend: FourierTrend, t):
    """Evaluate the trend at scalar or array time ``t``."""
    t_arr = np.asarray(t, dtype=np.float64)
    out = np.zeros(t_arr.shape)
    for h in trend.harmonics:
        if h.k == 0:
            out += h.a * math.cos(h.phi)
        else:
            out += h.a * np.cos(TWO_PI * h.k * t_arr / trend.period + h.phi)
    return float(out) if out.ndim == 0 else out


def expected_value(trend: FourierTrend, p: ExpectedValueParams, t):
    """Closed-form m(t) for scalar or array ``t >= 0``.

    Uses alpha * exp(-alpha t) * f(t) with the exponential distributed into
    each term, so large ``alpha * t`` does not overflow.
    """
    t_arr = np.asarray(t, dtype=np.float64)
    if np.any(t_arr < 0):
        raise ValueError("expected_value is defined for t >= 0")
    alpha = p.alpha
    decay = np.exp(-alpha * t_arr)
    out = p.m0 * decay
    for h in trend.harmonics:
        w = TWO_PI * h.k / trend.period
        theta = w * t_arr + h.phi
        gain = h.a * alpha / (alpha * alpha + w * w)
        now = alpha * np.cos(theta) + w * np.sin(theta)
        start = alpha * math.cos(h.phi) + w * math.sin(h.phi)
        out = out + gain * (now - decay * start)
    # the integral term vanishes identically at t = 0
    out = np.where(t_arr == 0.0, p.m0, out)
    return float(out) if out.ndim == 0 else out


def expected_value_path(trend: FourierTrend, p: ExpectedValueParams, n: int, dt: float):
    """m(t) on the grid ``t = i * dt`` for ``i = 0 .. n-1``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not dt > 0:
        raise ValueError("dt must be > 0")
    return np.asarray(expected_value(trend, p, np.arange(n) * dt), dtype=np.float64).reshape(n)


def table1_trend(period: float = 1.0) -> FourierTrend:
    """The ten-harmonic base trend used by the reference experiments."""
    text = resources.files("mrtrend.data").joinpath("table1_trend.json").read_text()
    return FourierTrend.from_json(text, period)
