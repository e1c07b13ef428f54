import os
import subprocess
import sys

import numpy as np
import pytest

import mrtrend
from mrtrend import _backend, _fallback
from mrtrend.spectral import _unit_circle

try:
    from mrtrend import _kernels
except ImportError:  # extension not built
    _kernels = None

needs_ext = pytest.mark.skipif(_kernels is None, reason="compiled extension not built")


def test_backend_reports_selection():
    assert mrtrend.BACKEND == _backend.BACKEND
    assert mrtrend.BACKEND in ("compiled", "python")
    if _kernels is not None and not os.environ.get("MRTREND_PURE_PYTHON"):
        assert mrtrend.BACKEND == "compiled"


def test_env_var_forces_fallback():
    env = dict(os.environ, MRTREND_PURE_PYTHON="1")
    proc = subprocess.run([sys.executable, "-c", "import mrtrend; print(mrtrend.BACKEND)"],
                          env=env, capture_output=True, text=True, check=True)
    assert proc.stdout.strip() == "python"


@needs_ext
@pytest.mark.parametrize("gamma_code", [0, 1, 2])
def test_euler_bit_identical(gamma_code, rng):
    n = 3000
    mu = 0.05 + 0.03 * np.sin(np.arange(n) / 40)
    z = rng.standard_normal(n)
    sigma = (0.4, 4.0, 8.0)[gamma_code]
    args = (0.05, mu, z, 20.0, sigma, gamma_code, 1 / 250)
    xc, cc = _kernels.euler_path(*args)
    xp, cp = _fallback.euler_path(*args)
    assert np.array_equal(xc, xp)
    assert cc == cp
    if gamma_code:
        assert cc > 0


@needs_ext
@pytest.mark.parametrize("n", [4, 5, 6, 50, 4001])
@pytest.mark.parametrize("lam", [1e-3, 1600.0, 4e5])
def test_hp_agrees(n, lam, rng):
    y = rng.normal(size=n).cumsum()
    c = _kernels.hp_solve(y, lam)
    p = _fallback.hp_solve(y, lam)
    assert np.max(np.abs(c - p)) < 1e-9 * max(1.0, np.max(np.abs(p)))


@needs_ext
@pytest.mark.parametrize("n_tab, n_out", [(7, 7), (64, 129), (4000, 4001)])
def test_synthesis_bit_identical(n_tab, n_out, rng):
    bins = np.sort(rng.choice(n_tab // 2 + 1, size=min(10, n_tab // 2 + 1), replace=False))
    bins = bins.astype(np.int64)
    amps = rng.uniform(0, 2, bins.size)
    phases = rng.uniform(-np.pi, np.pi, bins.size)
    ct, st = _unit_circle(n_tab)
    c = _kernels.cosine_synthesis(bins, amps, phases, ct, st, n_out)
    p = _fallback.cosine_synthesis(bins, amps, phases, ct, st, n_out)
    assert np.array_equal(c, p)
    t = np.arange(n_out)
    direct = sum(a * np.cos(2 * np.pi * b * t / n_tab + f) for b, a, f in zip(bins, amps, phases))
    np.testing.assert_allclose(c, direct, atol=1e-11)


def test_fallback_validation():
    with pytest.raises(ValueError):
        _fallback.euler_path(1.0, np.zeros(2), np.zeros(3), 1.0, 1.0, 0, 0.1)
    with pytest.raises(ValueError):
        _fallback.hp_solve(np.zeros(3), 1.0)
