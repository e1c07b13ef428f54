"""Two-phase Gaussian estimation of alpha, sigma and the periodic trend.

Phase 1 smooths the path into m_hat, differentiates it and plugs both into
the closed-form maximizers of the Euler-Maruyama likelihood. The implied
trend mu_hat = m_hat + m_dot_hat / alpha_hat is then projected onto its
largest DFT harmonics (phase 2) and alpha, sigma are re-estimated against
that reconstruction.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .deriv import DerivRule, differentiate
from .errors import DegenerateRegressorError, DomainError, NumericalError, SpectralLeakageError
from .sde import Gamma, SampledPath
from .smooth import SmootherConfig
from .spectral import HarmonicSpectrum, amplitude_phase, dft, reconstruct, select_top, to_fourier_trend


@dataclass(frozen=True, eq=False)
class Phase1Result:
    alpha_hat: float
    sigma_hat: float
    m_hat: np.ndarray
    m_dot_hat: np.ndarray
    mu_hat: np.ndarray
    loglik: float
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class Phase2Result:
    alpha_hat2: float
    sigma_hat2: float
    mu_hat2: np.ndarray
    harmonics: HarmonicSpectrum
    loglik: float


def _design(path: SampledPath, level, gamma: Gamma):
    x = path.values
    level = np.asarray(level, dtype=np.float64)
    if level.shape[0] != x.shape[0]:
        raise ValueError(f"series length {level.shape[0]} does not match path length {x.shape[0]}")
    prev = x[:-1]
    if gamma is not Gamma.ZERO and np.any(prev <= 0):
        raise DomainError(f"non-positive observation with gamma={gamma}")
    return np.diff(x), prev, level[:-1] - prev, gamma.power(prev)


def _closed_form(path: SampledPath, level, m_dot, gamma) -> tuple[float, float]:
    gamma = Gamma.parse(gamma)
    dt = path.dt
    dx, prev, gap, scale = _design(path, level, gamma)
    # ito-drift target: X_i - X_{i-1} - m_dot_{i-1} dt
    target = dx if m_dot is None else dx - np.asarray(m_dot, dtype=np.float64)[:-1] * dt
    z = gap / scale
    den = float(np.sum(z * z)) * dt
    ref = float(np.sum((prev / scale) ** 2)) * dt
    # an rms gap below 1e-9 of the level is smoother rounding noise, not signal
    if not den > 1e-18 * max(ref, 1e-300):
        raise DegenerateRegressorError(
            "the smoothed level coincides with the observations; alpha is not identified")
    alpha = float(np.sum(target * gap / (scale * scale))) / den
    resid = (target - alpha * gap * dt) / scale
    sigma = math.sqrt(float(np.sum(resid * resid)) / (path.n_steps * dt))
    return alpha, sigma


def phase1_closed_form(path: SampledPath, m_hat, m_dot_hat, gamma) -> tuple[float, float]:
    """Closed-form (alpha_hat, sigma_hat) given the smoothed level and its slope."""
    m_dot_hat = np.asarray(m_dot_hat, dtype=np.float64)
    if m_dot_hat.shape[0] != len(path):
        raise ValueError("m_dot_hat must have the path length")
    return _closed_form(path, m_hat, m_dot_hat, gamma)


def phase2_closed_form(path: SampledPath, mu_hat2, gamma) -> tuple[float, float]:
    """Closed-form re-estimates against a reconstructed trend (no slope term)."""
    return _closed_form(path, mu_hat2, None, gamma)


def gaussian_loglik(path: SampledPath, level, m_dot, alpha: float, sigma: float, gamma) -> float:
    """Log-likelihood of the Euler residuals Y_i ~ N(0, sigma^2 dt).

    ``level`` is m_hat with ``m_dot`` given (phase 1), or the trend itself
    with ``m_dot=None`` (phase 2).
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be > 0, got {sigma!r}")
    gamma = Gamma.parse(gamma)
    dt = path.dt
    dx, _, gap, scale = _design(path, level, gamma)
    drift = alpha * gap
    if m_dot is not None:
        drift = drift + np.asarray(m_dot, dtype=np.float64)[:-1]
    y = (dx - drift * dt) / scale
    var = sigma * sigma * dt
    return -0.5 * path.n_steps * math.log(2.0 * math.pi * var) - float(np.sum(y * y)) / (2.0 * var)


def phase1(path: SampledPath, smoother: SmootherConfig | None = None,
           rule=DerivRule.THREE_POINT, gamma=Gamma.ZERO, m_hat=None) -> Phase1Result:
    """First-phase estimates from one path.

    Passing ``m_hat`` skips the smoother (used to feed a known m(t)).
    """
    gamma = Gamma.parse(gamma)
    if m_hat is None:
        smoother = SmootherConfig.default_for(gamma) if smoother is None else smoother
        m_hat = smoother.apply(path.values)
    m_hat = np.asarray(m_hat, dtype=np.float64)
    m_dot = differentiate(m_hat, path.dt, rule)
    alpha, sigma = phase1_closed_form(path, m_hat, m_dot, gamma)
    notes = []
    if alpha == 0.0:
        raise NumericalError("alpha_hat is exactly zero; the implied trend is undefined")
    if alpha < 0:
        notes.append(f"non-reverting estimate alpha_hat={alpha:.6g}")
    mu_hat = m_hat + m_dot / alpha
    ll = gaussian_loglik(path, m_hat, m_dot, alpha, sigma, gamma) if sigma > 0 else math.inf
    return Phase1Result(alpha, sigma, m_hat, m_dot, mu_hat, ll, tuple(notes))


def trend_spectrum(mu_hat, n_window: int, dt: float) -> HarmonicSpectrum:
    """Full one-sided spectrum of the first ``n_window`` samples of ``mu_hat``."""
    mu_hat = np.asarray(mu_hat, dtype=np.float64)
    if not 2 <= n_window <= mu_hat.shape[0]:
        raise ValueError("n_window must lie in [2, len(mu_hat)]")
    return amplitude_phase(dft(mu_hat[:n_window]), dt)


def phase2(path: SampledPath, p1: Phase1Result, l_sum: int = 10, gamma=Gamma.ZERO,
           spectrum: HarmonicSpectrum | None = None) -> Phase2Result:
    """Second-phase estimates from the ``l_sum`` dominant harmonics of mu_hat.

    The DFT window is the first ``n_steps`` samples, i.e. the span
    ``n_steps * dt`` covered by the path's increments; the reconstruction is
    evaluated at all ``n_steps + 1`` sample times.
    """
    if l_sum < 1:
        raise ValueError("l_sum must be >= 1")
    gamma = Gamma.parse(gamma)
    if p1.mu_hat.shape[0] != len(path):
        raise ValueError("phase-1 mu_hat must have the path length")
    if spectrum is None:
        spectrum = trend_spectrum(p1.mu_hat, path.n_steps, path.dt)
    harmonics = select_top(spectrum, l_sum)
    mu_hat2 = reconstruct(harmonics, len(path))
    alpha, sigma = phase2_closed_form(path, mu_hat2, gamma)
    ll = gaussian_loglik(path, mu_hat2, None, alpha, sigma, gamma) if sigma > 0 else math.inf
    return Phase2Result(alpha, sigma, mu_hat2, harmonics, ll)


@dataclass(frozen=True, eq=False)
class EstimationReport:
    phase1: Phase1Result
    phase2: Phase2Result
    gamma: Gamma
    period: float | None = None
    diagnostics: dict = field(default_factory=dict)

    def harmonic_records(self) -> list[dict]:
        hs = self.phase2.harmonics
        try:
            trend = to_fourier_trend(hs, hs.window if self.period is None else self.period)
        except SpectralLeakageError:
            ks = hs.frequencies(self.period)
            return [{"k": float(k), "a": a, "phi": phi}
                    for k, (_, a, phi) in zip(ks, hs.entries())]
        return trend.to_records()

    def to_dict(self) -> dict:
        return {
            "alpha_hat": self.phase1.alpha_hat,
            "sigma_hat": self.phase1.sigma_hat,
            "alpha_hat2": self.phase2.alpha_hat2,
            "sigma_hat2": self.phase2.sigma_hat2,
            "harmonics": self.harmonic_records(),
            "diagnostics": dict(self.diagnostics),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def estimate_path(path: SampledPath, gamma=Gamma.ZERO, smoother: SmootherConfig | None = None,
                  rule=DerivRule.THREE_POINT, l_sum: int = 10,
                  period: float | None = None) -> EstimationReport:
    """Run both phases on one path."""
    gamma = Gamma.parse(gamma)
    smoother = SmootherConfig.default_for(gamma) if smoother is None else smoother
    p1 = phase1(path, smoother, rule, gamma)
    p2 = phase2(path, p1, l_sum, gamma)
    diagnostics = {
        "n_obs": len(path),
        "dt": path.dt,
        "gamma": str(gamma),
        "smoother": smoother.to_dict(),
        "deriv_rule": DerivRule(rule).value,
        "l_sum": l_sum,
        "loglik1": p1.loglik,
        "loglik2": p2.loglik,
        "warnings": list(p1.warnings),
    }
    hs = p2.harmonics
    try:
        to_fourier_trend(hs, hs.window if period is None else period)
    except SpectralLeakageError as exc:
        diagnostics["warnings"].append(str(exc))
    return EstimationReport(p1, p2, gamma, period, diagnostics)
