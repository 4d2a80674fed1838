"""NumPy implementations of the hot kernels.

Fallback for :mod:`qce._kernels_cy`; both expose the same two functions with
identical semantics so they can be swapped at import time and benchmarked
against each other.
"""

from __future__ import annotations

import math

import numpy as np

NAME = "numpy"

_WM_FLOOR = 1e-12
_CHUNK = 512


def reduce_rho_series(w, wp, wm, c12p, c12m, c22p, c22m, c23p, c23m, c24, times):
    """Two-qubit density matrices on a time grid, traced over the field.

    Parameters are the per-manifold weights w[n] (complex, includes the state
    normalization), the manifold frequencies and the amplitude constants of
    :func:`qce.dynamics.amplitude_constants`.  Returns a (T, 4, 4) complex
    array in the (ee, eg, ge, gg) basis, Hermitian by construction.
    """
    times = np.asarray(times, dtype=np.float64)
    n_t = times.size
    rho = np.empty((n_t, 4, 4), dtype=np.complex128)
    wm_zero = wm < _WM_FLOOR
    wm_safe = np.where(wm_zero, 1.0, wm)

    for s in range(0, n_t, _CHUNK):
        t = times[s : s + _CHUNK, None]
        sp = np.sin(wp * t)
        cp = np.cos(wp * t)
        sm = np.sin(wm * t)
        cm = np.cos(wm * t)
        slim = np.where(wm_zero, t, sm / wm_safe)

        u = w * (1j * (c12p * sp - c12m * slim))
        v = w * (c22p * cp - c22m * cm)
        x = w * (-1j * (c23p * sp - c23m * sm))
        y = w * (c24 * (cp - cm))

        blk = rho[s : s + _CHUNK]
        blk[:, 0, 0] = np.sum(np.abs(u) ** 2, axis=1)
        blk[:, 1, 1] = np.sum(np.abs(v) ** 2, axis=1)
        blk[:, 2, 2] = np.sum(np.abs(x) ** 2, axis=1)
        blk[:, 3, 3] = np.sum(np.abs(y) ** 2, axis=1)
        blk[:, 0, 1] = np.sum(u[:, 1:] * np.conj(v[:, :-1]), axis=1)
        blk[:, 0, 2] = np.sum(u[:, 1:] * np.conj(x[:, :-1]), axis=1)
        blk[:, 0, 3] = np.sum(u[:, 2:] * np.conj(y[:, :-2]), axis=1)
        blk[:, 1, 2] = np.sum(v * np.conj(x), axis=1)
        blk[:, 1, 3] = np.sum(v[:, 1:] * np.conj(y[:, :-1]), axis=1)
        blk[:, 2, 3] = np.sum(x[:, 1:] * np.conj(y[:, :-1]), axis=1)
        for i in range(1, 4):
            for j in range(i):
                blk[:, i, j] = np.conj(blk[:, j, i])
    return rho


def rk4_states(an, bn, lam, times_out, dt_max):
    """Classic RK4 stepping of i dpsi/dt = H psi through each manifold.

    H is tridiagonal with off-diagonals (an, lam, bn) and zero diagonal; the
    initial condition is (0, 1, 0, 0) in every manifold.  Returns the
    (K, M, 4) amplitudes at the requested output times (nondecreasing, from 0)
    and the largest per-manifold norm drift |  ||psi||^2 - 1 | observed at the
    output times.  The drift is reported, never renormalized away.
    """
    an = np.asarray(an, dtype=np.float64)
    bn = np.asarray(bn, dtype=np.float64)
    times_out = np.asarray(times_out, dtype=np.float64)
    m = an.size
    psi = np.zeros((m, 4), dtype=np.complex128)
    psi[:, 1] = 1.0
    out = np.empty((times_out.size, m, 4), dtype=np.complex128)
    drift = 0.0

    def deriv(p):
        q = np.empty_like(p)
        q[:, 0] = an * p[:, 1]
        q[:, 1] = an * p[:, 0] + lam * p[:, 2]
        q[:, 2] = lam * p[:, 1] + bn * p[:, 3]
        q[:, 3] = bn * p[:, 2]
        return -1j * q

    t_prev = 0.0
    for k, t_k in enumerate(times_out):
        span = t_k - t_prev
        if span > 0.0:
            n_sub = max(1, int(math.ceil(span / dt_max - 1e-12)))
            h = span / n_sub
            for _ in range(n_sub):
                k1 = deriv(psi)
                k2 = deriv(psi + (0.5 * h) * k1)
                k3 = deriv(psi + (0.5 * h) * k2)
                k4 = deriv(psi + h * k3)
                psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k] = psi
        drift = max(drift, float(np.max(np.abs(np.sum(np.abs(psi) ** 2, axis=1) - 1.0))))
        t_prev = t_k
    return out, drift
