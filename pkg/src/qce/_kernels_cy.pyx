# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled implementations of the hot kernels.

Mirrors :mod:`qce._kernels_np` function-for-function; selected automatically
by :mod:`qce.backend` when the extension is importable.
"""

from libc.math cimport sin, cos, sqrt, ceil, fabs

import numpy as np

NAME = "compiled"

cdef double WM_FLOOR = 1e-12


def reduce_rho_series(w, wp, wm, c12p, c12m, c22p, c22m, c23p, c23m, c24, times):
    """Two-qubit density matrices on a time grid, traced over the field.

    Same contract as the NumPy fallback: (T, 4, 4) complex output in the
    (ee, eg, ge, gg) basis, Hermitian by construction.
    """
    cdef double complex[::1] wv = np.ascontiguousarray(w, dtype=np.complex128)
    cdef double[::1] wpv = np.ascontiguousarray(wp, dtype=np.float64)
    cdef double[::1] wmv = np.ascontiguousarray(wm, dtype=np.float64)
    cdef double[::1] a12p = np.ascontiguousarray(c12p, dtype=np.float64)
    cdef double[::1] a12m = np.ascontiguousarray(c12m, dtype=np.float64)
    cdef double[::1] a22p = np.ascontiguousarray(c22p, dtype=np.float64)
    cdef double[::1] a22m = np.ascontiguousarray(c22m, dtype=np.float64)
    cdef double[::1] a23p = np.ascontiguousarray(c23p, dtype=np.float64)
    cdef double[::1] a23m = np.ascontiguousarray(c23m, dtype=np.float64)
    cdef double[::1] a24 = np.ascontiguousarray(c24, dtype=np.float64)
    cdef double[::1] tv = np.ascontiguousarray(times, dtype=np.float64)

    cdef Py_ssize_t m = wv.shape[0]
    cdef Py_ssize_t n_t = tv.shape[0]
    out_np = np.empty((n_t, 4, 4), dtype=np.complex128)
    cdef double complex[:, :, ::1] out = out_np

    buf_np = np.empty((4, m), dtype=np.complex128)
    cdef double complex[:, ::1] buf = buf_np
    cdef double complex I = 1j

    cdef Py_ssize_t k, n
    cdef double t, sp, cp, sm, cm, slim
    cdef double complex r00, r11, r22, r33, r01, r02, r03, r12, r13, r23
    cdef double complex un, vn, xn, yn

    for k in range(n_t):
        t = tv[k]
        for n in range(m):
            sp = sin(wpv[n] * t)
            cp = cos(wpv[n] * t)
            sm = sin(wmv[n] * t)
            cm = cos(wmv[n] * t)
            slim = t if wmv[n] < WM_FLOOR else sm / wmv[n]
            buf[0, n] = wv[n] * (I * (a12p[n] * sp - a12m[n] * slim))
            buf[1, n] = wv[n] * (a22p[n] * cp - a22m[n] * cm)
            buf[2, n] = wv[n] * (-I * (a23p[n] * sp - a23m[n] * sm))
            buf[3, n] = wv[n] * (a24[n] * (cp - cm))

        r00 = r11 = r22 = r33 = 0
        r01 = r02 = r03 = r12 = r13 = r23 = 0
        for n in range(m):
            un = buf[0, n]
            vn = buf[1, n]
            xn = buf[2, n]
            yn = buf[3, n]
            r00 = r00 + un * un.conjugate()
            r11 = r11 + vn * vn.conjugate()
            r22 = r22 + xn * xn.conjugate()
            r33 = r33 + yn * yn.conjugate()
            r12 = r12 + vn * xn.conjugate()
            if n + 1 < m:
                r01 = r01 + buf[0, n + 1] * vn.conjugate()
                r02 = r02 + buf[0, n + 1] * xn.conjugate()
                r13 = r13 + buf[1, n + 1] * yn.conjugate()
                r23 = r23 + buf[2, n + 1] * yn.conjugate()
            if n + 2 < m:
                r03 = r03 + buf[0, n + 2] * yn.conjugate()

        out[k, 0, 0] = r00
        out[k, 1, 1] = r11
        out[k, 2, 2] = r22
        out[k, 3, 3] = r33
        out[k, 0, 1] = r01
        out[k, 1, 0] = r01.conjugate()
        out[k, 0, 2] = r02
        out[k, 2, 0] = r02.conjugate()
        out[k, 0, 3] = r03
        out[k, 3, 0] = r03.conjugate()
        out[k, 1, 2] = r12
        out[k, 2, 1] = r12.conjugate()
        out[k, 1, 3] = r13
        out[k, 3, 1] = r13.conjugate()
        out[k, 2, 3] = r23
        out[k, 3, 2] = r23.conjugate()
    return out_np


def rk4_states(an, bn, lam, times_out, dt_max):
    """Classic RK4 stepping of i dpsi/dt = H psi through each manifold.

    Same contract as the NumPy fallback: (K, M, 4) amplitudes at the output
    times plus the largest per-manifold norm drift observed there.
    """
    cdef double[::1] av = np.ascontiguousarray(an, dtype=np.float64)
    cdef double[::1] bv = np.ascontiguousarray(bn, dtype=np.float64)
    cdef double[::1] tv = np.ascontiguousarray(times_out, dtype=np.float64)
    cdef double lam_c = lam
    cdef double dt_cap = dt_max

    cdef Py_ssize_t m = av.shape[0]
    cdef Py_ssize_t n_out = tv.shape[0]
    out_np = np.empty((n_out, m, 4), dtype=np.complex128)
    cdef double complex[:, :, ::1] out = out_np

    cdef double drift = 0.0, norm
    cdef Py_ssize_t n, k
    cdef long n_sub, step
    cdef double t_prev, span, h, a, b
    cdef double complex I = 1j
    cdef double complex p0, p1, p2, p3
    cdef double complex k10, k11, k12, k13
    cdef double complex k20, k21, k22, k23
    cdef double complex k30, k31, k32, k33
    cdef double complex k40, k41, k42, k43
    cdef double complex q0, q1, q2, q3

    for n in range(m):
        a = av[n]
        b = bv[n]
        p0 = 0
        p1 = 1
        p2 = 0
        p3 = 0
        t_prev = 0.0
        for k in range(n_out):
            span = tv[k] - t_prev
            if span > 0.0:
                n_sub = <long>ceil(span / dt_cap - 1e-12)
                if n_sub < 1:
                    n_sub = 1
                h = span / n_sub
                for step in range(n_sub):
                    k10 = -I * (a * p1)
                    k11 = -I * (a * p0 + lam_c * p2)
                    k12 = -I * (lam_c * p1 + b * p3)
                    k13 = -I * (b * p2)
                    q0 = p0 + 0.5 * h * k10
                    q1 = p1 + 0.5 * h * k11
                    q2 = p2 + 0.5 * h * k12
                    q3 = p3 + 0.5 * h * k13
                    k20 = -I * (a * q1)
                    k21 = -I * (a * q0 + lam_c * q2)
                    k22 = -I * (lam_c * q1 + b * q3)
                    k23 = -I * (b * q2)
                    q0 = p0 + 0.5 * h * k20
                    q1 = p1 + 0.5 * h * k21
                    q2 = p2 + 0.5 * h * k22
                    q3 = p3 + 0.5 * h * k23
                    k30 = -I * (a * q1)
                    k31 = -I * (a * q0 + lam_c * q2)
                    k32 = -I * (lam_c * q1 + b * q3)
                    k33 = -I * (b * q2)
                    q0 = p0 + h * k30
                    q1 = p1 + h * k31
                    q2 = p2 + h * k32
                    q3 = p3 + h * k33
                    k40 = -I * (a * q1)
                    k41 = -I * (a * q0 + lam_c * q2)
                    k42 = -I * (lam_c * q1 + b * q3)
                    k43 = -I * (b * q2)
                    p0 = p0 + (h / 6.0) * (k10 + 2.0 * k20 + 2.0 * k30 + k40)
                    p1 = p1 + (h / 6.0) * (k11 + 2.0 * k21 + 2.0 * k31 + k41)
                    p2 = p2 + (h / 6.0) * (k12 + 2.0 * k22 + 2.0 * k32 + k42)
                    p3 = p3 + (h / 6.0) * (k13 + 2.0 * k23 + 2.0 * k33 + k43)
            out[k, n, 0] = p0
            out[k, n, 1] = p1
            out[k, n, 2] = p2
            out[k, n, 3] = p3
            norm = (p0 * p0.conjugate()).real + (p1 * p1.conjugate()).real \
                 + (p2 * p2.conjugate()).real + (p3 * p3.conjugate()).real
            if fabs(norm - 1.0) > drift:
                drift = fabs(norm - 1.0)
            t_prev = tv[k]
    return out_np, drift
