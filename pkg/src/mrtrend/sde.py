"""Euler-Maruyama sample paths of dX = alpha (mu(t) - X) dt + sigma X^gamma dB."""
from __future__ import annotations

import csv
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _backend
from .errors import DomainError
from .trend import FourierTrend, eval_trend


class Gamma(enum.Enum):
    """Elasticity of the diffusion term, held exactly."""

    ZERO = 0
    HALF = 1
    ONE = 2

    @property
    def exponent(self) -> float:
        return (0.0, 0.5, 1.0)[self.value]

    @property
    def code(self) -> int:
        return self.value

    def power(self, x):
        """``x ** gamma`` with exact branches."""
        if self is Gamma.ZERO:
            return np.ones_like(np.asarray(x, dtype=np.float64))
        if self is Gamma.HALF:
            return np.sqrt(x)
        return np.asarray(x, dtype=np.float64)

    @classmethod
    def parse(cls, value) -> "Gamma":
        if isinstance(value, Gamma):
            return value
        if isinstance(value, str):
            try:
                value = Fraction(value.strip())
            except ValueError:
                raise ValueError(f"gamma must be one of 0, 1/2, 1; got {value!r}") from None
        for g in cls:
            if value == g.exponent:
                return g
        raise ValueError(f"gamma must be one of 0, 1/2, 1; got {value!r}")

    def __str__(self):
        return ("0", "0.5", "1")[self.value]


@dataclass(frozen=True)
class SdeParams:
    """Reversion rate, volatility and elasticity.

    ``sigma == 0`` is accepted and yields the deterministic Euler skeleton.
    """

    alpha: float
    sigma: float
    gamma: Gamma = Gamma.ZERO

    def __post_init__(self):
        object.__setattr__(self, "gamma", Gamma.parse(self.gamma))
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be > 0, got {self.alpha!r}")
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be >= 0, got {self.sigma!r}")


@dataclass(frozen=True)
class SeedSpec:
    """Key of one path's Gaussian stream.

    The stream is numpy's Philox-4x64 counter-based generator keyed through
    ``SeedSequence(base_seed, spawn_key=(path_index,))``, so each path is a
    function of its key alone.
    """

    base_seed: int
    path_index: int = 0

    def __post_init__(self):
        if self.path_index < 0:
            raise ValueError("path_index must be non-negative")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.base_seed) & (2**64 - 1),
                                    spawn_key=(int(self.path_index),))
        return np.random.Generator(np.random.Philox(ss))

    def normals(self, n: int) -> np.ndarray:
        return self.generator().standard_normal(n)


@dataclass(frozen=True, eq=False)
class SampledPath:
    """Uniformly sampled realization X_0 .. X_T."""

    values: np.ndarray
    dt: float
    t0: float = 0.0
    clamp_events: int = 0
    gamma: Gamma | None = field(default=None, repr=False)

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.shape[0] < 2:
            raise ValueError("a path needs at least 2 samples")
        if not self.dt > 0:
            raise ValueError("dt must be > 0")
        if self.gamma not in (None, Gamma.ZERO) and np.any(v <= 0):
            raise DomainError("path values must be positive for gamma in {1/2, 1}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def x0(self) -> float:
        return float(self.values[0])

    @property
    def n_steps(self) -> int:
        return self.values.shape[0] - 1

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(self.values.shape[0]) * self.dt

    def __len__(self):
        return self.values.shape[0]

    def __eq__(self, other):
        if not isinstance(other, SampledPath):
            return NotImplemented
        return (self.dt == other.dt and self.t0 == other.t0
                and np.array_equal(self.values, other.values))

    def to_csv(self, fh) -> None:
        write_path_csv(self, fh)


def simulate_path(params: SdeParams, trend: FourierTrend, x0: float, n_steps: int,
                  dt: float, seed: SeedSpec) -> SampledPath:
    """One Euler-Maruyama path, trend sampled at the left endpoint of each step."""
    gamma = params.gamma
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if not dt > 0:
        raise ValueError("dt must be > 0")
    if gamma is not Gamma.ZERO and not x0 > 0:
        raise DomainError(f"x0 must be > 0 for gamma={gamma}, got {x0!r}")
    mu = eval_trend(trend, np.arange(n_steps) * dt)
    z = seed.normals(n_steps)
    values, clamps = _backend.euler_path(float(x0), mu, z, float(params.alpha),
                                         float(params.sigma), gamma.code, float(dt))
    return SampledPath(values, dt, clamp_events=int(clamps), gamma=gamma)


def simulate_ensemble(params: SdeParams, trend: FourierTrend, x0: float, n_steps: int,
                      dt: float, n_paths: int, base_seed: int,
                      workers: int = 1) -> list[SampledPath]:
    """``n_paths`` paths; path ``j`` uses ``SeedSpec(base_seed, j)``."""
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")

    def one(j):
        return simulate_path(params, trend, x0, n_steps, dt, SeedSpec(base_seed, j))

    if workers <= 1:
        return [one(j) for j in range(n_paths)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(n_paths)))


def write_path_csv(path: SampledPath, fh) -> None:
    """CSV with header ``t,x`` at 17 significant digits."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t", "x"])
    for t, x in zip(path.times, path.values):
        w.writerow([f"{t:.17g}", f"{x:.17g}"])


def read_path_csv(fh, gamma=None) -> SampledPath:
    """Parse a ``t,x`` CSV back into a path; dt is taken from the time column."""
    rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["t", "x"]:
        raise ValueError("path CSV must start with the header 't,x'")
    data = np.array([[float(a), float(b)] for a, b in rows[1:] if (a or b)])
    if data.shape[0] < 2:
        raise ValueError("path CSV needs at least 2 rows")
    t, x = data[:, 0], data[:, 1]
    steps = np.diff(t)
    dt = float(np.mean(steps))
    if not dt > 0 or np.max(np.abs(steps - dt)) > 1e-9 * max(1.0, abs(t[-1])):
        raise ValueError("path CSV times must be uniformly spaced and increasing")
    return SampledPath(x, dt, t0=float(t[0]),
                       gamma=None if gamma is None else Gamma.parse(gamma))
