# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: tensor Gauss-Legendre quadrature of the radiated field.

Same contracts as elaa._kernels._np; selected automatically at import when
this extension is available.
"""

import numpy as np

from libc.math cimport cos, sin, sqrt

cdef double SQRT_4PI = sqrt(4.0 * 3.14159265358979323846)
cdef double FOUR_PI = 4.0 * 3.14159265358979323846


def cell_field_integrals(
    const double[::1] xc,
    const double[::1] yc,
    const double[::1] hx,
    const double[::1] hy,
    double xt,
    double yt,
    double z,
    double wavenumber,
    const double[::1] nodes,
    const double[::1] weights,
):
    cdef Py_ssize_t n = xc.shape[0]
    cdef Py_ssize_t q = nodes.shape[0]
    re = np.empty(n, dtype=np.float64)
    im = np.empty(n, dtype=np.float64)
    cdef double[::1] rev = re
    cdef double[::1] imv = im
    cdef Py_ssize_t m, i, j
    cdef double cx, cy, ax, ay, dx, dy, dx2z, s, r, amp, acc_re, acc_im, wi, ph
    with nogil:
        for m in range(n):
            cx = xc[m]
            cy = yc[m]
            ax = hx[m]
            ay = hy[m]
            acc_re = 0.0
            acc_im = 0.0
            for i in range(q):
                dx = cx + ax * nodes[i] - xt
                dx2z = dx * dx + z * z
                wi = weights[i]
                for j in range(q):
                    dy = cy + ay * nodes[j] - yt
                    s = dx2z + dy * dy
                    r = sqrt(s)
                    # |field| = sqrt(z (dx^2 + z^2)) / (sqrt(4 pi) s^{5/4})
                    amp = wi * weights[j] * sqrt(z * dx2z) / (SQRT_4PI * s * sqrt(r))
                    ph = wavenumber * r
                    acc_re += amp * cos(ph)
                    acc_im -= amp * sin(ph)
            rev[m] = ax * ay * acc_re
            imv[m] = ax * ay * acc_im
    return re + 1j * im


def cell_power_integrals(
    const double[::1] xc,
    const double[::1] yc,
    const double[::1] hx,
    const double[::1] hy,
    double xt,
    double yt,
    double z,
    const double[::1] nodes,
    const double[::1] weights,
    int mode,  # 0 = all, 1 = pathloss, 2 = pathloss_area
):
    cdef Py_ssize_t n = xc.shape[0]
    cdef Py_ssize_t q = nodes.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t m, i, j
    cdef double cx, cy, ax, ay, dx, dy, dx2z, s, acc, wi, v
    with nogil:
        for m in range(n):
            cx = xc[m]
            cy = yc[m]
            ax = hx[m]
            ay = hy[m]
            acc = 0.0
            for i in range(q):
                dx = cx + ax * nodes[i] - xt
                dx2z = dx * dx + z * z
                wi = weights[i]
                for j in range(q):
                    dy = cy + ay * nodes[j] - yt
                    s = dx2z + dy * dy
                    if mode == 0:
                        v = z * dx2z / (FOUR_PI * s * s * sqrt(s))
                    elif mode == 2:
                        v = z / (FOUR_PI * s * sqrt(s))
                    else:
                        v = 1.0 / (FOUR_PI * s)
                    acc += wi * weights[j] * v
            ov[m] = ax * ay * acc
    return out
