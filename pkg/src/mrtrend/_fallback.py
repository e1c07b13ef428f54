"""Pure-Python/numpy versions of the compiled kernels in ``_kernels.pyx``."""
from __future__ import annotations

import math

import numpy as np
from scipy.linalg import solveh_banded


def euler_path(x0, mu, z, alpha, sigma, gamma_code, dt):
    n = len(z)
    if len(mu) < n:
        raise ValueError("trend grid shorter than the noise stream")
    # plain floats keep the arithmetic identical to the compiled loop
    mu = np.asarray(mu, dtype=np.float64).tolist()
    z = np.asarray(z, dtype=np.float64).tolist()
    x = [0.0] * (n + 1)
    x[0] = xi = float(x0)
    sqdt = math.sqrt(dt)
    clamps = 0
    for i in range(n):
        if gamma_code == 0:
            g = 1.0
        elif gamma_code == 1:
            g = math.sqrt(xi) if xi > 0.0 else 0.0
        else:
            g = xi if xi > 0.0 else 0.0
        nxt = xi + alpha * (mu[i] - xi) * dt + sigma * g * sqdt * z[i]
        if gamma_code != 0 and nxt <= 0.0:
            nxt = abs(nxt)
            clamps += 1
        x[i + 1] = xi = nxt
    return np.array(x, dtype=np.float64), clamps


def hp_bands(n, lam):
    """Upper-form LAPACK bands of ``I + lam * D'D`` for ``solveh_banded``."""
    ab = np.zeros((3, n))
    diag = np.full(n, 6.0)
    diag[[0, -1]] = 1.0
    diag[[1, -2]] = 5.0
    off1 = np.full(n - 1, -4.0)
    off1[[0, -1]] = -2.0
    ab[2] = 1.0 + lam * diag
    ab[1, 1:] = lam * off1
    ab[0, 2:] = lam
    return ab


def hp_solve(y, lam):
    y = np.asarray(y, dtype=np.float64)
    if y.shape[0] < 4:
        raise ValueError("HP filter needs at least 4 observations")
    return solveh_banded(hp_bands(y.shape[0], lam), y, check_finite=False)


def cosine_synthesis(bins, amps, phases, cos_table, sin_table, n_out):
    n_tab = cos_table.shape[0]
    n = np.arange(n_out, dtype=np.int64)
    out = np.zeros(n_out)
    for b, a, phi in zip(np.asarray(bins).tolist(), np.asarray(amps).tolist(),
                         np.asarray(phases).tolist()):
        m = (b % n_tab) * n % n_tab
        out += a * (cos_table[m] * math.cos(phi) - sin_table[m] * math.sin(phi))
    return out
