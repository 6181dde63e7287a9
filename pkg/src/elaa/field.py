"""Exact complex field model and numerically integrated channel vectors.

This module is the ground truth the closed forms in :mod:`elaa.gain` are
checked against: channel coefficients are computed by adaptive tensor
Gauss-Legendre quadrature of the complex field over each antenna cell.

The field expression is a radiated-wave (Green function) approximation and
is only trusted beyond a few wavelengths from the source; evaluation closer
than ``REACTIVE_GUARD_WAVELENGTHS`` wavelengths raises
:class:`~elaa.exceptions.ReactiveNearFieldError`.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from elaa import _kernels
from elaa.exceptions import DomainError, QuadratureError, ReactiveNearFieldError
from elaa.gain import zeta_bound_grid
from elaa.geometry import ArraySpec, SourcePoint, antenna_centers, antenna_region
from elaa.quadrature import DEFAULT_QUADRATURE, QuadratureConfig

#: Reactive near-field guard: the field model requires source-to-point
#: distances of at least this many wavelengths.
REACTIVE_GUARD_WAVELENGTHS = 3.0

CHANNEL_MODELS = ("integral", "hybrid")


@dataclass(frozen=True)
class ChannelVector:
    """Per-antenna complex channel coefficients h_1..h_N with provenance.

    ``model`` records how the coefficients were produced: "integral" (full
    complex quadrature per antenna) or "hybrid" (closed-form amplitude with
    the center-point propagation phase).
    """

    coefficients: np.ndarray
    model: str

    def __post_init__(self):
        if self.model not in CHANNEL_MODELS:
            raise DomainError(f"model must be one of {CHANNEL_MODELS}, got {self.model!r}")
        object.__setattr__(
            self, "coefficients", np.asarray(self.coefficients, dtype=np.complex128)
        )

    @property
    def num_antennas(self) -> int:
        return self.coefficients.shape[0]

    @property
    def total_gain(self) -> float:
        """Matched-filter total gain, sum of |h_n|^2."""
        return float(np.sum(np.abs(self.coefficients) ** 2))

    def to_json_dict(self) -> dict:
        return {
            "model": self.model,
            "num_antennas": self.num_antennas,
            "total_gain": self.total_gain,
            "coefficients": [
                {"n": i + 1, "re": float(c.real), "im": float(c.imag)}
                for i, c in enumerate(self.coefficients)
            ],
        }

    def write_csv(self, path) -> None:
        """Write rows (n, re, im), one per antenna, in index order."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "re", "im"])
            for i, c in enumerate(self.coefficients):
                writer.writerow([i + 1, repr(float(c.real)), repr(float(c.imag))])

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=1)


def _guard_distance(r, wavelength):
    rmin = float(np.min(r))
    limit = REACTIVE_GUARD_WAVELENGTHS * wavelength
    if rmin < limit:
        raise ReactiveNearFieldError(
            f"evaluation point at {rmin:.6g} m from the source is inside the "
            f"reactive near-field guard ({REACTIVE_GUARD_WAVELENGTHS:g} wavelengths "
            f"= {limit:.6g} m); the radiated-field model is invalid there"
        )


def electric_field(source: SourcePoint, at, wavelength) -> complex:
    """Normalized complex field of the source observed at a point in z=0.

    The modulus squared is z((x-xt)^2+z^2) / (4 pi s^{5/2}) with
    s = ||at - p_t||^2 (so a broadside point recovers the free-space power
    density 1/(4 pi d^2)), and the phase is -2 pi ||at - p_t|| / wavelength.
    """
    if len(at) == 3 and at[2] != 0:
        raise DomainError(f"field is evaluated in the z=0 plane, got z={at[2]}")
    if not wavelength > 0:
        raise DomainError(f"wavelength must be > 0, got {wavelength}")
    dx = at[0] - source.x
    dy = at[1] - source.y
    z = source.z
    s = dx * dx + dy * dy + z * z
    r = math.sqrt(s)
    _guard_distance(r, wavelength)
    amp = math.sqrt(z * (dx * dx + z * z)) / (math.sqrt(4.0 * math.pi) * s**1.25)
    phase = -2.0 * math.pi * r / wavelength
    return complex(amp * math.cos(phase), amp * math.sin(phase))


def antenna_phase(source: SourcePoint, center, wavelength) -> float:
    """Propagation phase 2 pi mod(||p_t - p_n|| / wavelength, 1), in [0, 2 pi)."""
    dx = center[0] - source.x
    dy = center[1] - source.y
    r = math.sqrt(dx * dx + dy * dy + source.z * source.z)
    return 2.0 * math.pi * math.fmod(r / wavelength, 1.0)


def _min_cell_distances(xc, yc, hx, hy, source: SourcePoint) -> np.ndarray:
    """Distance from the source to the closest point of each cell."""
    px = np.clip(source.x, xc - hx, xc + hx)
    py = np.clip(source.y, yc - hy, yc + hy)
    return np.sqrt((px - source.x) ** 2 + (py - source.y) ** 2 + source.z**2)


def _adaptive_field_integrals(
    xc, yc, half, source, wavelength, quad: QuadratureConfig, threads=1
):
    """Complex cell integrals refined by order doubling until stable."""
    k = 2.0 * math.pi / wavelength

    def integrate(order):
        return _kernels.cell_field_integrals(
            xc, yc, half, half, source.x, source.y, source.z, k, order, threads=threads
        )

    order = quad.initial_order(2.0 * half, wavelength)
    previous = integrate(order)
    err = math.inf
    while 2 * order <= quad.max_order:
        order *= 2
        current = integrate(order)
        scale = float(np.max(np.abs(current)))
        err = float(np.max(np.abs(current - previous)))
        if scale == 0.0 or err <= quad.rtol * scale:
            return current
        previous = current
    raise QuadratureError(
        f"cell integrals did not reach rtol={quad.rtol:g} below "
        f"max_order={quad.max_order} (last change {err:.3e})",
        estimate=previous,
        error_bound=err,
    )


def channel_coefficient(
    spec: ArraySpec, source: SourcePoint, n: int, quad: QuadratureConfig | None = None
) -> complex:
    """Complex channel coefficient (1/a) * integral of the field over cell n.

    The modulus squared is the exact per-antenna channel gain; deterministic
    for a fixed quadrature configuration.
    """
    quad = quad or DEFAULT_QUADRATURE
    region = antenna_region(spec, n)
    half = region.side / 2.0
    rmin = _min_cell_distances(
        np.array([region.x]), np.array([region.y]), half, half, source
    )
    _guard_distance(rmin, spec.wavelength)
    value = _adaptive_field_integrals(
        np.array([region.x]), np.array([region.y]), half, source, spec.wavelength, quad
    )
    return complex(value[0] / region.side)


def channel_vector(
    spec: ArraySpec,
    source: SourcePoint,
    mode: str = "hybrid",
    quad: QuadratureConfig | None = None,
    threads: int = 1,
) -> ChannelVector:
    """Channel vector h between the source and every antenna of the array.

    mode "integral": full complex quadrature per antenna (amplitude and
    phase from the field integral). mode "hybrid": closed-form amplitude
    (square root of the per-cell power integral) with the center-point
    propagation phase; accurate for sub-wavelength antennas and much
    cheaper on large arrays.
    """
    if mode not in CHANNEL_MODELS:
        raise DomainError(f"mode must be one of {CHANNEL_MODELS}, got {mode!r}")
    quad = quad or DEFAULT_QUADRATURE
    xc, yc = antenna_centers(spec)
    half = spec.antenna_side / 2.0
    _guard_distance(
        np.min(_min_cell_distances(xc, yc, half, half, source)), spec.wavelength
    )
    if mode == "integral":
        values = _adaptive_field_integrals(
            xc, yc, half, source, spec.wavelength, quad, threads=threads
        )
        return ChannelVector(values / spec.antenna_side, model="integral")
    amplitudes = np.sqrt(zeta_bound_grid(spec, source))
    r = np.sqrt((xc - source.x) ** 2 + (yc - source.y) ** 2 + source.z**2)
    phases = 2.0 * np.pi * np.mod(r / spec.wavelength, 1.0)
    return ChannelVector(amplitudes * np.exp(-1j * phases), model="hybrid")
