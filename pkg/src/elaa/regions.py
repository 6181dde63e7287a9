"""Field-region distance metrics and normalized antenna / array gains.

Three distances characterize a planar aperture of diagonal W built from
antennas of diagonal D:

* Fraunhofer distance 2 D^2 / wavelength — phase criterion for one antenna;
* Fraunhofer array distance 2 W^2 / wavelength = N * (antenna value) —
  phase criterion for the whole aperture;
* amplitude distance 2 W (wavelength-independent) — beyond it the array
  achieves near-maximal, amplitude-limited gain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from elaa.exceptions import DomainError, QuadratureError
from elaa.gain import alpha_total, zeta_bound
from elaa.geometry import ArraySpec, SourcePoint, antenna_centers
from elaa.quadrature import gauss_legendre
from elaa import _kernels


@dataclass(frozen=True)
class RegionReport:
    """Distance metrics of one array spec, all in meters."""

    fraunhofer: float
    fraunhofer_array: float
    amplitude: float
    array_diagonal: float
    antenna_diagonal: float


@dataclass(frozen=True)
class PowerLoss:
    """Average spherical-wavefront power loss over an aperture of diagonal W."""

    exact_ratio: float  # received power ratio, spherical vs planar wavefront
    exact_loss: float  # 1 - exact_ratio
    taylor_loss: float  # leading term W^2 / (8 d^2)


def fraunhofer_distance(antenna_diagonal, wavelength):
    """Classical far-field boundary 2 D^2 / wavelength for one antenna."""
    if not antenna_diagonal > 0 or not wavelength > 0:
        raise DomainError("antenna_diagonal and wavelength must be > 0")
    return 2.0 * antenna_diagonal**2 / wavelength


def fraunhofer_array_distance(num_antennas, antenna_diagonal, wavelength):
    """Whole-array phase boundary 2 (D sqrt(N))^2 / wavelength = N * 2D^2/wavelength."""
    if not num_antennas >= 1:
        raise DomainError(f"num_antennas must be >= 1, got {num_antennas}")
    w = antenna_diagonal * np.sqrt(num_antennas)
    return 2.0 * w**2 / wavelength


def amplitude_distance(num_antennas, antenna_diagonal):
    """Amplitude-variation boundary 2 W = 2 D sqrt(N); wavelength-independent."""
    if not num_antennas >= 1:
        raise DomainError(f"num_antennas must be >= 1, got {num_antennas}")
    if not antenna_diagonal > 0:
        raise DomainError(f"antenna_diagonal must be > 0, got {antenna_diagonal}")
    return 2.0 * antenna_diagonal * np.sqrt(num_antennas)


def region_report(spec: ArraySpec) -> RegionReport:
    """All distance metrics of ``spec``."""
    d = spec.antenna_diagonal
    return RegionReport(
        fraunhofer=fraunhofer_distance(d, spec.wavelength),
        fraunhofer_array=fraunhofer_array_distance(
            spec.num_antennas, d, spec.wavelength
        ),
        amplitude=amplitude_distance(spec.num_antennas, d),
        array_diagonal=spec.array_diagonal,
        antenna_diagonal=d,
    )


def normalized_antenna_gain(field_fn, area, center=(0.0, 0.0), order=32):
    """Coherence ratio |integral E|^2 / (A * integral |E|^2) over one cell.

    ``field_fn(x, y)`` must accept NumPy arrays and return the complex field.
    Equals 1 exactly for a perpendicular plane wave (constant field) and
    stays close to 1 whenever the field is locally planar over the cell.
    """
    if not area > 0:
        raise DomainError(f"area must be > 0, got {area}")
    half = np.sqrt(area) / 2.0

    def both(q):
        g, w = gauss_legendre(q)
        x = center[0] + half * g
        y = center[1] + half * g
        vals = field_fn(x[:, None], y[None, :])
        ww = w[:, None] * w[None, :]
        coherent = np.abs(np.sum(ww * vals)) ** 2 * half**4
        power = np.sum(ww * np.abs(vals) ** 2) * half**2
        return coherent / (area * power)

    coarse, fine = both(order), both(2 * order)
    if abs(fine - coarse) > 1e-7 * max(abs(fine), 1e-300):
        raise QuadratureError(
            "antenna-gain quadrature did not converge",
            estimate=fine,
            error_bound=abs(fine - coarse),
        )
    return float(fine)


def normalized_array_gain(
    spec: ArraySpec, distance, mode="exact", rtol=1e-6, threads=1
):
    """Normalized array gain at broadside distance ``d``, in [0, 1].

    mode "bound" evaluates the closed form alpha(d, N) / (N alpha(d, 1)),
    tight for sub-wavelength antennas. mode "exact" integrates the complex
    field per antenna: sum_n |I_n|^2 / (N A J) with J the power integral
    over an identical origin-centered reference cell; the quadrature order
    starts at 4x4 per cell and doubles until the aggregate value moves less
    than ``rtol``. The bound never falls below the exact value.
    """
    if not distance > 0:
        raise DomainError(f"distance must be > 0, got {distance}")
    n = spec.num_antennas
    area = spec.antenna_area
    if mode == "bound":
        return float(
            alpha_total(distance, n, area) / (n * alpha_total(distance, 1, area))
        )
    if mode != "exact":
        raise DomainError(f"mode must be 'exact' or 'bound', got {mode!r}")
    xc, yc = antenna_centers(spec)
    half = spec.antenna_side / 2.0
    k = 2.0 * np.pi / spec.wavelength
    source = SourcePoint(0.0, 0.0, float(distance))
    reference = zeta_bound(source, (0.0, 0.0), spec.antenna_side)

    def total(q):
        cells = _kernels.cell_field_integrals(
            xc, yc, half, half, 0.0, 0.0, distance, k, q, threads=threads
        )
        return float(np.sum(np.abs(cells) ** 2)) / (n * area * reference)

    order, previous = 4, None
    while order <= 256:
        current = total(order)
        if previous is not None and abs(current - previous) <= rtol * max(
            current, 1e-300
        ):
            return current
        previous = current
        order *= 2
    raise QuadratureError(
        "array-gain quadrature did not converge", estimate=previous
    )


def spherical_power_loss(array_diagonal, distance) -> PowerLoss:
    """Average power loss of a spherical versus planar wavefront.

    Exact ratio log(1 + (W/2d)^2) / (W/2d)^2 over a disc of diameter W,
    with second-order Taylor loss W^2 / (8 d^2). The loss is ~1/32 at
    d = 2W, which motivates that distance as the amplitude boundary.
    """
    if not distance > 0 or not array_diagonal > 0:
        raise DomainError("distance and array_diagonal must be > 0")
    q = (array_diagonal / (2.0 * distance)) ** 2
    ratio = float(np.log1p(q) / q)
    return PowerLoss(
        exact_ratio=ratio,
        exact_loss=1.0 - ratio,
        taylor_loss=array_diagonal**2 / (8.0 * distance**2),
    )
