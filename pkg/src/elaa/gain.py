"""Closed-form channel gains, far-field approximations, and asymptotics.

The central quantity is the aperture power integral of the radiated field
magnitude over a rectangle, which has the exact closed form implemented by
:func:`zeta_bound`. Summed over an edge-to-edge grid it is additive, and for
a centered source over the full square aperture it collapses to
:func:`alpha_total` (and :func:`xi_total` for oblique sources). All values
are dimensionless power ratios in [0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from elaa import _kernels
from elaa.exceptions import DomainError, QuadratureError
from elaa.geometry import ArraySpec, SourcePoint, antenna_centers
from elaa.quadrature import graded_edges


@dataclass(frozen=True)
class GainReport:
    """Total gain value tagged with the model that produced it."""

    value: float
    model: str  # exact | properties12 | property1 | farfield
    distance: float
    angle: float
    num_antennas: float
    antenna_area: float


@dataclass(frozen=True)
class ScalingLawCurve:
    """SNR-vs-N points under transmit power scaled as P/N^rho."""

    rho: float
    reference_power: float
    num_antennas: np.ndarray
    snr: np.ndarray


def friis_gain(antenna_area, distance):
    """Free-space channel gain A/(4 pi d^2) of a perpendicular antenna."""
    if not np.all(np.asarray(distance) > 0):
        raise DomainError(f"distance must be > 0, got {distance}")
    if not np.all(np.asarray(antenna_area) > 0):
        raise DomainError(f"antenna_area must be > 0, got {antenna_area}")
    return antenna_area / (4.0 * np.pi * np.asarray(distance) ** 2)


def _corner_sum(u, v):
    """Antiderivative term of the aperture power integral, odd in u and v.

    u, v are corner offsets normalized by the source height z. The y-like
    argument v carries the polarization factor, hence the asymmetry.
    """
    c = np.sqrt(u * u + v * v + 1.0)
    return u * v / (3.0 * (v * v + 1.0) * c) + (2.0 / 3.0) * np.arctan(u * v / c)


def zeta_bound_cells(xc, yc, side, source: SourcePoint):
    """Exact per-cell power integral (upper bound on each |h_n|^2), vectorized.

    For square cells of ``side`` centered at (xc, yc) and a source at
    (xt, yt, z), evaluates the four-corner closed form

        (1/4pi) * sum_{u in U} sum_{v in V} corner(u/z, v/z)

    with U = {side/2 + xc - xt, side/2 - xc + xt} and V likewise in y.
    """
    xc = np.asarray(xc, dtype=np.float64)
    yc = np.asarray(yc, dtype=np.float64)
    z = source.z
    h = side / 2.0
    total = np.zeros(np.broadcast(xc, yc).shape)
    for u in (h + xc - source.x, h - xc + source.x):
        for v in (h + yc - source.y, h - yc + source.y):
            total = total + _corner_sum(u / z, v / z)
    return total / (4.0 * np.pi)


def zeta_bound(source: SourcePoint, center, side):
    """Scalar power integral over one square cell; see :func:`zeta_bound_cells`.

    ``center`` is the cell center (x, y) (a trailing 0 coordinate is
    accepted); the result lies in (0, 1) for any z > 0.
    """
    cx, cy = center[0], center[1]
    if not side > 0:
        raise DomainError(f"cell side must be > 0, got {side}")
    return float(zeta_bound_cells(np.float64(cx), np.float64(cy), side, source))


def zeta_bound_grid(spec: ArraySpec, source: SourcePoint) -> np.ndarray:
    """Per-antenna power integrals for the whole grid, in index order."""
    x, y = antenna_centers(spec)
    return zeta_bound_cells(x, y, spec.antenna_side, source)


def alpha_total(distance, num_antennas, antenna_area):
    """Total broadside channel gain of the square aperture, in (0, 1/3).

    With b = N * beta_d * pi = N*A/(4 d^2):

        alpha = N beta_d / (3 (b+1) sqrt(2b+1)) + (2/(3 pi)) atan(b / sqrt(2b+1))

    Strictly increasing in N, strictly decreasing in d, limit 1/3 as the
    aperture grows without bound. ``num_antennas`` may be any positive number
    (the value depends on N and A only through the area N*A), which makes
    asymptotic evaluation cheap.
    """
    d = np.asarray(distance, dtype=np.float64)
    if not np.all(d > 0):
        raise DomainError(f"distance must be > 0, got {distance}")
    n_beta = num_antennas * friis_gain(antenna_area, d)
    b = n_beta * np.pi
    root = np.sqrt(2.0 * b + 1.0)
    return n_beta / (3.0 * (b + 1.0) * root) + (2.0 / (3.0 * np.pi)) * np.arctan(
        b / root
    )


def xi_total(distance, angle, num_antennas, antenna_area):
    """Total channel gain for a source at range d and azimuth angle.

    Two-corner closed form with b = N*A/(4 (d cos angle)^2); reduces exactly
    to :func:`alpha_total` at angle 0. Depends on (N, A) only through N*A.
    """
    d = np.asarray(distance, dtype=np.float64)
    if not np.all(d > 0):
        raise DomainError(f"distance must be > 0, got {distance}")
    if not np.all(np.abs(angle) < np.pi / 2):
        raise DomainError(f"|angle| must be < pi/2 strictly, got {angle}")
    t = np.tan(angle)
    b = num_antennas * antenna_area / (4.0 * (d * np.cos(angle)) ** 2)
    sb = np.sqrt(b)
    total = 0.0
    for sign in (-1.0, 1.0):
        num = b + sign * sb * t
        root = np.sqrt(2.0 * b + t * t + 1.0 + 2.0 * sign * sb * t)
        total = total + num / (6.0 * np.pi * (b + 1.0) * root) + (
            1.0 / (3.0 * np.pi)
        ) * np.arctan(num / root)
    return total


def farfield_gain(distance, angle, num_antennas, antenna_area):
    """Far-field total gain N * beta_{d cos angle} * cos^3(angle).

    Linear in N; accurate when d cos(angle) is large against the array
    diagonal sqrt(2NA).
    """
    if not np.all(np.abs(angle) < np.pi / 2):
        raise DomainError(f"|angle| must be < pi/2 strictly, got {angle}")
    zdist = np.asarray(distance) * np.cos(angle)
    return num_antennas * friis_gain(antenna_area, zdist) * np.cos(angle) ** 3


def aperture_gain_quadrature(distance, side, factors="all", order=24, threads=1):
    """Numerically integrate the broadside aperture power over a square.

    Integrates the selected magnitude-squared factors over
    [-side/2, side/2]^2 for a source at (0, 0, distance), using
    origin-graded tensor panels (the integrand is peaked at the center with
    characteristic scale ``distance``). Exploits the even symmetry in x and
    y by integrating one quadrant.

    factors: "all" (exact), "pathloss_area", or "pathloss" (see _kernels).
    """
    if not distance > 0:
        raise DomainError(f"distance must be > 0, got {distance}")
    if not side > 0:
        raise DomainError(f"side must be > 0, got {side}")
    edges = graded_edges(distance, side / 2.0)
    lo, hi = edges[:-1], edges[1:]
    cx = ((lo[:, None] + hi[:, None]) / 2.0 * np.ones_like(lo)[None, :]).ravel()
    hx = ((hi[:, None] - lo[:, None]) / 2.0 * np.ones_like(lo)[None, :]).ravel()
    cy = (np.ones_like(lo)[:, None] * (lo[None, :] + hi[None, :]) / 2.0).ravel()
    hy = (np.ones_like(lo)[:, None] * (hi[None, :] - lo[None, :]) / 2.0).ravel()

    def total(q):
        cells = _kernels.cell_power_integrals(
            cx, cy, hx, hy, 0.0, 0.0, distance, q, factors=factors, threads=threads
        )
        return 4.0 * float(np.sum(cells))

    coarse, fine = total(order), total(2 * order)
    err = abs(fine - coarse)
    if err > 1e-8 * max(abs(fine), 1e-300):
        raise QuadratureError(
            f"aperture quadrature did not converge (changed by {err:.3e})",
            estimate=fine,
            error_bound=err,
        )
    return fine


def partial_property_gain(distance, num_antennas, antenna_area, properties):
    """Broadside aperture gain keeping only selected propagation properties.

    ``properties`` is {1} (distance-dependent pathloss only) or {1, 2}
    (pathloss and effective-area reduction, no polarization loss). These are
    the surrogate models that saturate at 1/2 ({1, 2}) or diverge ({1}) as
    the aperture grows, versus 1/3 for the exact model. Evaluated by
    quadrature over the full aperture; only defined for a centered source.
    """
    props = frozenset(properties)
    if props == frozenset({1}):
        factors = "pathloss"
    elif props == frozenset({1, 2}):
        factors = "pathloss_area"
    else:
        raise DomainError(
            f"properties must be {{1}} or {{1, 2}}, got {set(properties)!r}"
        )
    side = math.sqrt(num_antennas * antenna_area)
    return aperture_gain_quadrature(distance, side, factors=factors)


def snr_mf(total_gain, transmit_power, noise_power):
    """Matched-filter SNR: total_gain * P / sigma^2.

    The same value is achieved by uplink combining and downlink precoding
    with the conjugate-channel unit-norm filter.
    """
    if not np.all(np.asarray(transmit_power) > 0):
        raise DomainError(f"transmit_power must be > 0, got {transmit_power}")
    if not np.all(np.asarray(noise_power) > 0):
        raise DomainError(f"noise_power must be > 0, got {noise_power}")
    g = np.asarray(total_gain)
    if np.any(g < 0) or np.any(g > 1):
        raise DomainError(f"total_gain must lie in [0, 1], got {total_gain}")
    return g * transmit_power / noise_power


def scaling_law_sweep(
    distance, antenna_area, rho, n_list, reference_power=None, noise_power=1.0
) -> ScalingLawCurve:
    """Broadside MF SNR versus N with transmit power P / N^rho.

    When ``reference_power`` is None it is calibrated so the N=1 point sits
    at SNR 1 (0 dB). For rho > 0 the curve tends to zero as N grows; for
    rho = 0 it saturates at alpha-limit/3 over the calibration gain.
    """
    if rho < 0:
        raise DomainError(f"rho must be >= 0, got {rho}")
    n = np.asarray(n_list, dtype=np.float64)
    gains = alpha_total(distance, n, antenna_area)
    if reference_power is None:
        reference_power = float(noise_power / alpha_total(distance, 1, antenna_area))
    snr = gains * reference_power / (noise_power * n**rho)
    return ScalingLawCurve(
        rho=float(rho),
        reference_power=reference_power,
        num_antennas=n,
        snr=snr,
    )
