"""Summary statistics and the mean-square error metrics of the result tables."""
from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass
from typing import Mapping, Sequence

import numpy as np

MODE_BINS = 100


@dataclass(frozen=True)
class Summary:
    mean: float
    median: float
    mode: float
    std: float

    def rows(self):
        return [("mean", self.mean), ("median", self.median),
                ("mode", self.mode), ("std", self.std)]

    def to_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["statistic", "value"])
        for name, value in self.rows():
            w.writerow([name, f"{value:.17g}"])

    @classmethod
    def from_csv(cls, fh) -> "Summary":
        rows = {r["statistic"]: float(r["value"]) for r in csv.DictReader(fh)}
        return cls(**{k: rows[k] for k in asdict(cls(0, 0, 0, 0))})


def histogram_mode(values, bins: int = MODE_BINS) -> float:
    """Midpoint of the fullest of ``bins`` equal-width bins over [min, max].

    Ties go to the lower bin.
    """
    x = np.asarray(values, dtype=np.float64)
    lo, hi = float(x.min()), float(x.max())
    if lo == hi:
        return lo
    counts, edges = np.histogram(x, bins=bins, range=(lo, hi))
    i = int(np.argmax(counts))
    return 0.5 * (edges[i] + edges[i + 1])


def summarize(values) -> Summary:
    """Mean, median, histogram mode and sample (n-1) standard deviation."""
    x = np.asarray(values, dtype=np.float64).reshape(-1)
    if x.size == 0:
        raise ValueError("cannot summarize an empty series")
    # sort first so the result does not depend on input order
    x = np.sort(x)
    std = float(np.std(x, ddof=1)) if x.size > 1 else 0.0
    return Summary(float(np.mean(x)), float(np.median(x)), histogram_mode(x), std)


def rms(a, b) -> float:
    """Mean of squared differences, sum((a - b)^2) / n.

    Not square-rooted; this is the "RMS" figure the tables report.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise ValueError("rms of empty series")
    d = a - b
    return float(np.mean(d * d))


def root_rms(a, b) -> float:
    return math.sqrt(rms(a, b))


def successive_L_rms(mu_reconstructions: Mapping[int, Sequence[float]]) -> dict[int, float]:
    """``rms(mean_{L-1}, mean_L)`` for every L whose predecessor is present.

    Raises if the supplied L values are not consecutive.
    """
    ls = sorted(mu_reconstructions)
    if len(ls) < 2:
        raise ValueError("need reconstructions for at least two consecutive L")
    missing = sorted(set(range(ls[0], ls[-1] + 1)) - set(ls))
    if missing:
        raise ValueError(f"missing reconstructions for L={missing}")
    return {l: rms(mu_reconstructions[l - 1], mu_reconstructions[l]) for l in ls[1:]}


def ensemble_mean_series(paths) -> np.ndarray:
    """Pointwise mean over equally long series."""
    if len(paths) == 0:
        raise ValueError("need at least one series")
    lengths = {len(p) for p in paths}
    if len(lengths) != 1:
        raise ValueError(f"ragged input, lengths {sorted(lengths)}")
    return np.mean(np.asarray(paths, dtype=np.float64), axis=0)
