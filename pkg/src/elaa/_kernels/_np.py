"""Vectorized NumPy implementation of the quadrature hot kernels.

Shapes: cell centers and half-extents broadcast to (n,); returns (n,).
Chunking keeps the (chunk, order, order) intermediates within a few tens of MB.
"""

import numpy as np

from elaa.quadrature import gauss_legendre

_SQRT_4PI = np.sqrt(4.0 * np.pi)
_CHUNK_BUDGET = 2_000_000  # node evaluations per chunk


def _prep(xc, yc, hx, hy):
    xc = np.atleast_1d(np.asarray(xc, dtype=np.float64))
    yc = np.atleast_1d(np.asarray(yc, dtype=np.float64))
    n = xc.shape[0]
    hx = np.broadcast_to(np.asarray(hx, dtype=np.float64), (n,))
    hy = np.broadcast_to(np.asarray(hy, dtype=np.float64), (n,))
    return xc, yc, hx, hy, n


def cell_field_integrals(xc, yc, hx, hy, xt, yt, z, wavenumber, order):
    """Per-cell integral of the complex radiated field.

    Integrates amp(x, y) * exp(-i * wavenumber * r) over the rectangles
    [xc-hx, xc+hx] x [yc-hy, yc+hy] with an order x order tensor
    Gauss-Legendre rule, where r^2 = (x-xt)^2 + (y-yt)^2 + z^2 and
    amp = sqrt(z((x-xt)^2+z^2)) / (sqrt(4 pi) r^{5/2}).
    """
    xc, yc, hx, hy, n = _prep(xc, yc, hx, hy)
    g, w = gauss_legendre(order)
    out = np.empty(n, dtype=np.complex128)
    chunk = max(1, _CHUNK_BUDGET // (order * order))
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        dx = (xc[lo:hi, None] + hx[lo:hi, None] * g[None, :]) - xt
        dy = (yc[lo:hi, None] + hy[lo:hi, None] * g[None, :]) - yt
        dx2z = dx * dx + z * z
        s = dx2z[:, :, None] + (dy * dy)[:, None, :]
        amp = np.sqrt(z * dx2z[:, :, None]) / (_SQRT_4PI * s ** 1.25)
        val = amp * np.exp(-1j * wavenumber * np.sqrt(s))
        out[lo:hi] = hx[lo:hi] * hy[lo:hi] * np.einsum(
            "i,j,nij->n", w, w, val, optimize=True
        )
    return out


def cell_power_integrals(xc, yc, hx, hy, xt, yt, z, order, factors="all"):
    """Per-cell integral of the squared field magnitude, factor-selectable.

    factors:
      "all"            z((x-xt)^2+z^2) / (4 pi s^{5/2})   (distance, area, polarization)
      "pathloss_area"  z / (4 pi s^{3/2})                 (distance, area)
      "pathloss"       1 / (4 pi s)                       (distance only)
    with s = (x-xt)^2 + (y-yt)^2 + z^2.
    """
    if factors not in ("all", "pathloss", "pathloss_area"):
        raise ValueError(f"unknown factors selection {factors!r}")
    xc, yc, hx, hy, n = _prep(xc, yc, hx, hy)
    g, w = gauss_legendre(order)
    out = np.empty(n, dtype=np.float64)
    chunk = max(1, _CHUNK_BUDGET // (order * order))
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        dx = (xc[lo:hi, None] + hx[lo:hi, None] * g[None, :]) - xt
        dy = (yc[lo:hi, None] + hy[lo:hi, None] * g[None, :]) - yt
        dx2 = dx * dx
        s = (dx2 + z * z)[:, :, None] + (dy * dy)[:, None, :]
        if factors == "all":
            val = z * (dx2 + z * z)[:, :, None] / (4.0 * np.pi * s ** 2.5)
        elif factors == "pathloss_area":
            val = z / (4.0 * np.pi * s ** 1.5)
        else:
            val = 1.0 / (4.0 * np.pi * s)
        out[lo:hi] = hx[lo:hi] * hy[lo:hi] * np.einsum(
            "i,j,nij->n", w, w, val, optimize=True
        )
    return out
