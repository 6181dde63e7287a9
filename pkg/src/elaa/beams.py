"""Paraxial beam-focusing gains, Fresnel integrals, and depth of focus.

On the broadside axis the normalized array gain of a square aperture focused
at z and observed at d collapses to a single profile

    A(x) = (C(sqrt(x))^2 + S(sqrt(x))^2)^2 / x^2,
    x = d_fa / (8 * z_eff),   z_eff = d z / |d - z|,

where d_fa is the whole-array phase boundary (2 W^2 / wavelength) and C, S
are the Fresnel cosine/sine integrals. A decreases from A(0) = 1 on [0, 2]
and passes 0.5 near x = 1.25, which yields closed-form 3 dB depth-of-focus
intervals: finite exactly when the focal point is closer than d_fa / 10.

An infinite focal distance is represented by the explicit sentinel
``math.inf`` (far-field focusing), never by a large finite float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from elaa.exceptions import DomainError
from elaa.quadrature import gauss_legendre

_SMALL_LIMIT = 4.0  # panel quadrature below, asymptotic series above
_PANEL_WIDTH = 0.125
_PANEL_ORDER = 24


def _fresnel_panels():
    """Cumulative C and S at fixed panel boundaries on [0, _SMALL_LIMIT]."""
    edges = np.arange(0.0, _SMALL_LIMIT + _PANEL_WIDTH / 2, _PANEL_WIDTH)
    g, w = gauss_legendre(_PANEL_ORDER)
    mid = (edges[:-1] + edges[1:]) / 2.0
    half = _PANEL_WIDTH / 2.0
    t = mid[:, None] + half * g[None, :]
    arg = 0.5 * np.pi * t * t
    cos_p = half * np.sum(w[None, :] * np.cos(arg), axis=1)
    sin_p = half * np.sum(w[None, :] * np.sin(arg), axis=1)
    cum_c = np.concatenate([[0.0], np.cumsum(cos_p)])
    cum_s = np.concatenate([[0.0], np.cumsum(sin_p)])
    return edges, cum_c, cum_s


_EDGES, _CUM_C, _CUM_S = _fresnel_panels()


def _fresnel_small(x):
    """C(x), S(x) for 0 <= x <= _SMALL_LIMIT via cached panel quadrature."""
    x = np.asarray(x, dtype=np.float64)
    idx = np.minimum((x / _PANEL_WIDTH).astype(int), len(_EDGES) - 2)
    start = _EDGES[idx]
    g, w = gauss_legendre(_PANEL_ORDER)
    half = (x - start) / 2.0
    t = (start + half)[..., None] + half[..., None] * g
    arg = 0.5 * np.pi * t * t
    c = _CUM_C[idx] + half * np.sum(w * np.cos(arg), axis=-1)
    s = _CUM_S[idx] + half * np.sum(w * np.sin(arg), axis=-1)
    return c, s


def _fresnel_aux(x):
    """C(x), S(x) for x > ~3 via the auxiliary-function asymptotic series.

    C = 1/2 + f sin(pi x^2/2) - g cos(pi x^2/2),
    S = 1/2 - f cos(pi x^2/2) - g sin(pi x^2/2),
    f ~ (1/(pi x)) sum_m (-1)^m (4m-1)!! / (pi x^2)^(2m),
    g ~ (1/(pi^2 x^3)) sum_m (-1)^m (4m+1)!! / (pi x^2)^(2m).

    Series terms are added while they decrease; truncation error is below
    1e-12 for x >= 4.
    """
    x = np.asarray(x, dtype=np.float64)
    px2 = np.pi * x * x
    inv2 = 1.0 / (px2 * px2)
    f_sum = np.ones_like(x)
    g_sum = np.ones_like(x)
    tf = np.ones_like(x)
    tg = np.ones_like(x)
    # The series is asymptotic: at x = 4 terms shrink through m ~ 13, so 12
    # terms keep truncation error below ~1e-12; for larger x they decay fast.
    for m in range(12):
        tf = -tf * (4 * m + 1) * (4 * m + 3) * inv2
        tg = -tg * (4 * m + 3) * (4 * m + 5) * inv2
        f_sum += tf
        g_sum += tg
        if np.all(np.abs(tf) < 1e-17) and np.all(np.abs(tg) < 1e-17):
            break
    f = f_sum / (np.pi * x)
    g = g_sum / (np.pi**2 * x**3)
    w = 0.5 * np.pi * x * x
    sin_w, cos_w = np.sin(w), np.cos(w)
    return 0.5 + f * sin_w - g * cos_w, 0.5 - f * cos_w - g * sin_w


def _fresnel_both(x):
    x = np.asarray(x, dtype=np.float64)
    sign = np.sign(x)
    ax = np.abs(x)
    c = np.empty_like(ax)
    s = np.empty_like(ax)
    small = ax <= _SMALL_LIMIT
    if np.any(small):
        cs, ss = _fresnel_small(ax[small])
        c[small], s[small] = cs, ss
    if np.any(~small):
        cl, sl = _fresnel_aux(ax[~small])
        c[~small], s[~small] = cl, sl
    return sign * c, sign * s


def fresnel_c(x):
    """Fresnel cosine integral C(x) = int_0^x cos(pi t^2 / 2) dt (odd in x)."""
    c, _ = _fresnel_both(np.asarray(x, dtype=np.float64))
    return c if np.ndim(x) else float(c)


def fresnel_s(x):
    """Fresnel sine integral S(x) = int_0^x sin(pi t^2 / 2) dt (odd in x)."""
    _, s = _fresnel_both(np.asarray(x, dtype=np.float64))
    return s if np.ndim(x) else float(s)


def focus_gain_factor(x):
    """Normalized on-axis gain profile A(x) = (C^2 + S^2)^2 / x^2 at sqrt(x).

    A(0) = 1 (by continuity), A is strictly decreasing on [0, 2], and
    A(1.25) ~ 0.5 — the 3 dB point used by the depth-of-focus interval.
    """
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0):
        raise DomainError("focus factor argument must be >= 0")
    out = np.ones_like(x)
    nz = x > 0
    if np.any(nz):
        c, s = _fresnel_both(np.sqrt(x[nz]))
        out[nz] = (c * c + s * s) ** 2 / (x[nz] * x[nz])
    return out if np.ndim(x) else float(out)


@dataclass(frozen=True)
class DepthOfFocus:
    """3 dB depth-of-focus interval of a beam focused at ``focal``.

    ``upper`` and ``depth`` are math.inf when the focal point is at or
    beyond d_fa / 10 (the far-field focusing regime).
    """

    focal: float  # may be math.inf
    lower: float
    upper: float
    depth: float


@dataclass(frozen=True)
class FocusProfile:
    """Sampled on-axis gain of a beam focused at ``focal``."""

    focal: float  # may be math.inf
    d_fa: float
    distances: np.ndarray
    gains: np.ndarray


def effective_focal_distance(d, z):
    """Focal deviation scale z_eff = d z / |d - z| (inf at d = z; d for z = inf)."""
    if math.isinf(z):
        return float(d)
    if d == z:
        return math.inf
    return d * z / abs(d - z)


def gain_at_focus(z, d_fa):
    """Maximum normalized gain when focusing at distance z: A(d_fa / (8 z)).

    Approaches 1 for z >> d_fa; drops noticeably when z is a small fraction
    of d_fa (the aperture can no longer focus all energy at the point).
    """
    if not d_fa > 0:
        raise DomainError(f"d_fa must be > 0, got {d_fa}")
    if math.isinf(z):
        return 1.0
    if not z > 0:
        raise DomainError(f"focal distance must be > 0, got {z}")
    return float(focus_gain_factor(d_fa / (8.0 * z)))


def gain_off_focus(d, z, d_fa):
    """Normalized gain at distance d of a beam focused at z: A(d_fa/(8 z_eff)).

    ``z`` may be math.inf (far-field beam, z_eff = d). The removable
    singularity at d = z evaluates to the limit value 1.
    """
    if not d > 0:
        raise DomainError(f"distance must be > 0, got {d}")
    if not d_fa > 0:
        raise DomainError(f"d_fa must be > 0, got {d_fa}")
    if not math.isinf(z) and not z > 0:
        raise DomainError(f"focal distance must be > 0 or inf, got {z}")
    z_eff = effective_focal_distance(d, z)
    if math.isinf(z_eff):
        return 1.0
    return float(focus_gain_factor(d_fa / (8.0 * z_eff)))


def depth_of_focus(z, d_fa) -> DepthOfFocus:
    """Closed-form 3 dB depth-of-focus of a beam focused at z.

    Finite interval [d_fa z/(d_fa + 10 z), d_fa z/(d_fa - 10 z)] when
    z < d_fa / 10; otherwise (including z = inf and the z = d_fa/10
    boundary) the upper limit and the depth are infinite.
    """
    if not d_fa > 0:
        raise DomainError(f"d_fa must be > 0, got {d_fa}")
    if math.isinf(z):
        return DepthOfFocus(focal=math.inf, lower=d_fa / 10.0, upper=math.inf, depth=math.inf)
    if not z > 0:
        raise DomainError(f"focal distance must be > 0 or inf, got {z}")
    lower = d_fa * z / (d_fa + 10.0 * z)
    if z >= d_fa / 10.0:
        return DepthOfFocus(focal=z, lower=lower, upper=math.inf, depth=math.inf)
    upper = d_fa * z / (d_fa - 10.0 * z)
    depth = 20.0 * d_fa * z * z / (d_fa**2 - 100.0 * z * z)
    return DepthOfFocus(focal=z, lower=lower, upper=upper, depth=depth)


def half_gain_crossings(z, d_fa, rtol=1e-12):
    """Numeric 0.5-crossings of the off-focus gain around the focal point.

    Returns (lower, upper); ``upper`` is math.inf when the gain never falls
    to 0.5 beyond the focal point. This is the exact-crossing counterpart of
    the closed-form interval of :func:`depth_of_focus` (which is built on
    the approximation A(1.25) ~ 0.5); the two agree to well under 1%.
    """
    # A(x) = 0.5 at x_half; crossings are where d_fa/(8 z_eff) = x_half.
    x_half = _solve_half_factor(rtol)
    target = d_fa / (8.0 * x_half)  # z_eff at the crossings
    if math.isinf(z):
        return target, math.inf
    # z_eff = d z / |d - z| = target  =>  d = target z / (target +- z)
    lower = target * z / (target + z)
    if z >= target:
        return lower, math.inf
    return lower, target * z / (target - z)


def _solve_half_factor(rtol):
    lo, hi = 0.5, 2.0
    while (hi - lo) > rtol * hi:
        mid = (lo + hi) / 2.0
        if float(focus_gain_factor(mid)) > 0.5:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def focus_profile(z, d_fa, distances) -> FocusProfile:
    """Sample the on-axis gain of a beam focused at z over ``distances``."""
    d = np.asarray(distances, dtype=np.float64)
    gains = np.array([gain_off_focus(float(di), z, d_fa) for di in d])
    return FocusProfile(focal=z, d_fa=float(d_fa), distances=d, gains=gains)
