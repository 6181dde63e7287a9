"""Quadrature kernel backends: compiled extension with NumPy fallback.

The compiled backend (``elaa._kernels._cy``) is used when importable; the
pure-NumPy backend is selected otherwise, or when the environment variable
``ELAA_BACKEND`` is set to ``python``/``numpy``. Both produce identical
results up to floating-point rounding; ``benchmarks/bench_backends.py``
compares their speed.

Public entry points accept a ``threads`` argument. Work is split into
contiguous index slabs and results are stitched back in index order, so
output is independent of the thread count.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from elaa._kernels import _np as _numpy_backend
from elaa.quadrature import gauss_legendre

_POWER_MODES = {"all": 0, "pathloss": 1, "pathloss_area": 2}

_force = os.environ.get("ELAA_BACKEND", "").strip().lower()
if _force in ("python", "numpy"):
    _compiled = None
elif _force in ("", "auto", "compiled", "cython"):
    try:
        from elaa._kernels import _cy as _compiled
    except ImportError:
        if _force in ("compiled", "cython"):
            raise
        _compiled = None
else:
    raise ValueError(f"unrecognized ELAA_BACKEND={_force!r}")

BACKEND = "compiled" if _compiled is not None else "numpy"


def backend_name() -> str:
    """Active backend: 'compiled' or 'numpy'."""
    return BACKEND


def _as_cells(xc, yc, hx, hy):
    xc = np.ascontiguousarray(np.atleast_1d(xc), dtype=np.float64)
    yc = np.ascontiguousarray(np.atleast_1d(yc), dtype=np.float64)
    n = xc.shape[0]
    hx = np.ascontiguousarray(np.broadcast_to(np.asarray(hx, dtype=np.float64), (n,)))
    hy = np.ascontiguousarray(np.broadcast_to(np.asarray(hy, dtype=np.float64), (n,)))
    return xc, yc, hx, hy, n


def _run(fn, n, threads, *arrays_then_args):
    """Apply a slab-wise kernel deterministically across threads."""
    arrays, args = arrays_then_args[:4], arrays_then_args[4:]
    if threads <= 1 or n < 256:
        return fn(*arrays, *args)
    bounds = np.linspace(0, n, threads + 1, dtype=int)
    slabs = [
        tuple(a[lo:hi] for a in arrays) + args
        for lo, hi in zip(bounds[:-1], bounds[1:])
        if hi > lo
    ]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        parts = list(ex.map(lambda s: fn(*s), slabs))
    return np.concatenate(parts)


def cell_field_integrals(xc, yc, hx, hy, xt, yt, z, wavenumber, order, threads=1):
    """Per-cell tensor GL integral of the complex field (see _np docstring)."""
    xc, yc, hx, hy, n = _as_cells(xc, yc, hx, hy)
    if _compiled is not None:
        g, w = gauss_legendre(order)
        return _run(
            _compiled.cell_field_integrals, n, threads,
            xc, yc, hx, hy, float(xt), float(yt), float(z), float(wavenumber), g, w,
        )

    def fn(xs, ys, hxs, hys, *args):
        return _numpy_backend.cell_field_integrals(xs, ys, hxs, hys, *args)

    return _run(fn, n, threads, xc, yc, hx, hy, xt, yt, z, wavenumber, order)


def cell_power_integrals(xc, yc, hx, hy, xt, yt, z, order, factors="all", threads=1):
    """Per-cell tensor GL integral of |field|^2 with selectable loss factors."""
    if factors not in _POWER_MODES:
        raise ValueError(f"unknown factors selection {factors!r}")
    xc, yc, hx, hy, n = _as_cells(xc, yc, hx, hy)
    if _compiled is not None:
        g, w = gauss_legendre(order)
        return _run(
            _compiled.cell_power_integrals, n, threads,
            xc, yc, hx, hy, float(xt), float(yt), float(z), g, w,
            _POWER_MODES[factors],
        )

    def fn(xs, ys, hxs, hys, *args):
        return _numpy_backend.cell_power_integrals(xs, ys, hxs, hys, *args)

    return _run(fn, n, threads, xc, yc, hx, hy, xt, yt, z, order, factors)
