# cython: language_level=3
"""Compiled inner loops: the Euler-Maruyama recursion, the banded
Hodrick-Prescott solve and the table-driven cosine synthesis.

``mrtrend._fallback`` carries the pure-Python versions. The Euler and
synthesis kernels are bit-identical to their fallbacks, the HP kernel agrees
to rounding.
"""
import numpy as np

from libc.math cimport cos, fabs, sin, sqrt


def euler_path(double x0, const double[::1] mu, const double[::1] z,
               double alpha, double sigma, int gamma_code, double dt):
    """Run the Euler-Maruyama recursion over ``len(z)`` steps.

    ``gamma_code`` is 0, 1, 2 for elasticity 0, 1/2, 1. Returns the path
    (length ``len(z) + 1``) and the number of reflected steps.
    """
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t i
    if mu.shape[0] < n:
        raise ValueError("trend grid shorter than the noise stream")
    out = np.empty(n + 1, dtype=np.float64)
    cdef double[::1] x = out
    cdef double sqdt = sqrt(dt)
    cdef double xi, g, nxt
    cdef long clamps = 0
    x[0] = x0
    with nogil:
        for i in range(n):
            xi = x[i]
            if gamma_code == 0:
                g = 1.0
            elif gamma_code == 1:
                g = sqrt(xi) if xi > 0.0 else 0.0
            else:
                g = xi if xi > 0.0 else 0.0
            nxt = xi + alpha * (mu[i] - xi) * dt + sigma * g * sqdt * z[i]
            if gamma_code != 0 and nxt <= 0.0:
                nxt = fabs(nxt)
                clamps += 1
            x[i + 1] = nxt
    return out, clamps


def hp_solve(const double[::1] y, double lam):
    """Solve ``(I + lam * D'D) tau = y`` by a pentadiagonal LDL' sweep."""
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t i
    if n < 4:
        raise ValueError("HP filter needs at least 4 observations")
    out = np.empty(n, dtype=np.float64)
    work = np.zeros((3, n + 2), dtype=np.float64)
    cdef double[::1] tau = out
    cdef double[::1] dd = work[0]
    cdef double[::1] l1 = work[1]
    cdef double[::1] l2 = work[2]
    cdef double diag, off1, off2
    cdef double dm1, dm2, l1m1
    with nogil:
        # factorization, fused with the forward substitution
        for i in range(n):
            if i == 0 or i == n - 1:
                diag = 1.0
            elif i == 1 or i == n - 2:
                diag = 5.0
            else:
                diag = 6.0
            diag = 1.0 + lam * diag
            dm1 = dd[i - 1] if i >= 1 else 0.0
            dm2 = dd[i - 2] if i >= 2 else 0.0
            if i >= 2:
                off2 = lam
                l2[i] = off2 / dm2
            if i >= 1:
                off1 = -2.0 if (i == 1 or i == n - 1) else -4.0
                off1 = lam * off1
                l1m1 = l1[i - 1] if i >= 2 else 0.0
                if i >= 2:
                    l1[i] = (off1 - l2[i] * l1m1 * dm2) / dm1
                else:
                    l1[i] = off1 / dm1
            dd[i] = diag - l1[i] * l1[i] * dm1 - l2[i] * l2[i] * dm2
            tau[i] = y[i]
            if i >= 1:
                tau[i] -= l1[i] * tau[i - 1]
            if i >= 2:
                tau[i] -= l2[i] * tau[i - 2]
        for i in range(n):
            tau[i] /= dd[i]
        for i in range(n - 2, -1, -1):
            tau[i] -= l1[i + 1] * tau[i + 1]
            if i + 2 < n:
                tau[i] -= l2[i + 2] * tau[i + 2]
    return out


def cosine_synthesis(const long long[::1] bins, const double[::1] amps,
                     const double[::1] phases, const double[::1] cos_table,
                     const double[::1] sin_table, Py_ssize_t n_out):
    """Sum of ``a_j cos(2 pi b_j n / N + phi_j)`` for n < n_out.

    ``cos_table[m]`` and ``sin_table[m]`` hold cos/sin of ``2 pi m / N``; the
    phase enters through the angle-addition identity.
    """
    cdef Py_ssize_t n_tab = cos_table.shape[0]
    cdef Py_ssize_t h, i, m, step
    cdef double a, cp, sp
    out = np.zeros(n_out, dtype=np.float64)
    cdef double[::1] acc = out
    for h in range(bins.shape[0]):
        a = amps[h]
        cp = cos(phases[h])
        sp = sin(phases[h])
        step = bins[h] % n_tab
        with nogil:
            m = 0
            for i in range(n_out):
                acc[i] = acc[i] + a * (cos_table[m] * cp - sin_table[m] * sp)
                m += step
                if m >= n_tab:
                    m -= n_tab
    return out
