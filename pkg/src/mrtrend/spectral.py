"""DFT analysis of a sampled trend and its re-synthesis from a few cosines."""
from __future__ import annotations

import csv
import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import SpectralLeakageError
from .trend import FourierTrend, Harmonic


@dataclass(frozen=True, eq=False)
class ComplexSpectrum:
    """Unnormalized forward DFT coefficients M_0 .. M_{N-1}."""

    coefficients: np.ndarray

    @property
    def n(self) -> int:
        return self.coefficients.shape[0]

    @property
    def real(self) -> np.ndarray:
        return self.coefficients.real

    @property
    def imag(self) -> np.ndarray:
        return self.coefficients.imag

    def is_conjugate_symmetric(self, rtol: float = 1e-9) -> bool:
        c = self.coefficients
        mirror = np.conj(np.roll(c[::-1], 1))
        scale = max(float(np.max(np.abs(c))), 1e-300)
        return bool(np.max(np.abs(c - mirror)) <= rtol * scale)


@dataclass(frozen=True, eq=False)
class HarmonicSpectrum:
    """One-sided cosine representation: per bin an amplitude and a phase.

    ``n_samples`` and ``sample_dt`` describe the analysed window, so bin ``j``
    is the frequency ``j / (n_samples * sample_dt)`` per unit time.
    """

    bins: np.ndarray
    amplitudes: np.ndarray
    phases: np.ndarray
    n_samples: int
    sample_dt: float = 1.0

    def __post_init__(self):
        bins = np.asarray(self.bins, dtype=np.int64).reshape(-1)
        amps = np.asarray(self.amplitudes, dtype=np.float64).reshape(-1)
        phases = np.asarray(self.phases, dtype=np.float64).reshape(-1)
        if not (bins.shape == amps.shape == phases.shape):
            raise ValueError("bins, amplitudes and phases must have equal length")
        if bins.size and (bins.min() < 0 or bins.max() > self.n_samples // 2):
            raise ValueError("bins must lie in [0, N/2]")
        if np.unique(bins).size != bins.size:
            raise ValueError("bins must be unique")
        if np.any(amps < 0):
            raise ValueError("amplitudes must be >= 0")
        for name, arr in (("bins", bins), ("amplitudes", amps), ("phases", phases)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self):
        return self.bins.shape[0]

    @property
    def window(self) -> float:
        return self.n_samples * self.sample_dt

    def entries(self):
        return list(zip(self.bins.tolist(), self.amplitudes.tolist(), self.phases.tolist()))

    def subset(self, index) -> "HarmonicSpectrum":
        return HarmonicSpectrum(self.bins[index], self.amplitudes[index],
                                self.phases[index], self.n_samples, self.sample_dt)

    def frequencies(self, period: float | None = None) -> np.ndarray:
        """Cycles per trend period for each bin (``period`` defaults to the window)."""
        period = self.window if period is None else period
        return self.bins * (period / self.window)


def dft(series) -> ComplexSpectrum:
    """Forward DFT, M_k = sum_n x_n exp(-2 pi i k n / N), no normalization."""
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] < 2:
        raise ValueError("dft needs a 1-D series of length >= 2")
    return ComplexSpectrum(np.fft.fft(x))


def idft(spectrum: ComplexSpectrum) -> np.ndarray:
    """Inverse DFT with the 1/N factor; returns the real part."""
    if not spectrum.is_conjugate_symmetric():
        warnings.warn("spectrum is not conjugate-symmetric; discarding the imaginary part",
                      RuntimeWarning, stacklevel=2)
    return np.fft.ifft(spectrum.coefficients).real


def amplitude_phase(spectrum: ComplexSpectrum, sample_dt: float = 1.0) -> HarmonicSpectrum:
    """One-sided amplitudes and phases for bins 0 .. floor(N/2)."""
    n = spectrum.n
    half = n // 2
    c = spectrum.coefficients[: half + 1]
    amps = 2.0 * np.abs(c) / n
    amps[0] /= 2.0
    if n % 2 == 0:
        amps[half] /= 2.0
    phases = np.arctan2(c.imag, c.real)
    # DC and Nyquist are real for real input; drop rounding noise in the phase
    phases[0] = 0.0 if c[0].real >= 0 else math.pi
    if n % 2 == 0:
        phases[half] = 0.0 if c[half].real >= 0 else math.pi
    phases = np.where(phases <= -math.pi, math.pi, phases)
    return HarmonicSpectrum(np.arange(half + 1), amps, phases, n, sample_dt)


def select_top(hs: HarmonicSpectrum, l_sum: int) -> HarmonicSpectrum:
    """Keep the ``l_sum`` largest amplitudes (ties go to the lower bin), sorted by bin."""
    if l_sum < 1:
        raise ValueError("l_sum must be >= 1")
    order = np.lexsort((hs.bins, -hs.amplitudes))[:l_sum]
    return hs.subset(order[np.argsort(hs.bins[order], kind="stable")])


def reconstruct(hs: HarmonicSpectrum, n_out: int | None = None) -> np.ndarray:
    """Sample n of sum_j a_j cos(2 pi j n / N + phi_j) for n = 0 .. n_out-1."""
    n_out = hs.n_samples if n_out is None else n_out
    if n_out < 1:
        raise ValueError("n_out must be >= 1")
    cos_table, sin_table = _unit_circle(hs.n_samples)
    return _backend.cosine_synthesis(hs.bins, hs.amplitudes, hs.phases, cos_table, sin_table,
                                     int(n_out))


@functools.lru_cache(maxsize=8)
def _unit_circle(n: int):
    angle = 2.0 * np.pi * np.arange(n) / n
    tables = np.cos(angle), np.sin(angle)
    for t in tables:
        t.setflags(write=False)
    return tables


def to_fourier_trend(hs: HarmonicSpectrum, period: float = 1.0, atol: float = 1e-9) -> FourierTrend:
    """Map bins to harmonics of a trend with the given period.

    Bin ``j`` is ``k = j * period / (N * dt)`` cycles per period; a
    non-integer ``k`` means the window does not hold whole periods of that
    tone and raises :class:`SpectralLeakageError`.
    """
    scale = period / hs.window
    harmonics = []
    for j, a, phi in sorted(hs.entries()):
        k = j * scale
        if abs(k - round(k)) > atol * max(1.0, abs(k)):
            raise SpectralLeakageError(
                f"bin {j} maps to non-integer frequency k={k:.6g} for period {period:g} "
                f"(window {hs.window:g})")
        harmonics.append(Harmonic(int(round(k)), a, phi))
    return FourierTrend(tuple(harmonics), period)


def write_spectrum_csv(hs: HarmonicSpectrum, fh, period: float | None = None) -> None:
    """CSV ``bin,k,amplitude,phase``; ``k`` in cycles per trend period."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["bin", "k", "amplitude", "phase"])
    for (j, a, phi), k in zip(hs.entries(), hs.frequencies(period)):
        w.writerow([j, f"{k:.17g}", f"{a:.17g}", f"{phi:.17g}"])


def read_spectrum_csv(fh, n_samples: int, sample_dt: float = 1.0) -> HarmonicSpectrum:
    rows = list(csv.DictReader(fh))
    return HarmonicSpectrum([int(r["bin"]) for r in rows],
                            [float(r["amplitude"]) for r in rows],
                            [float(r["phase"]) for r in rows], n_samples, sample_dt)
