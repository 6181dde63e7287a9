"""Planar array geometry: grid layout, antenna cells, and source placement.

The array tiles a square of side sqrt(N*A) with N = m*m antennas of area A,
deployed edge-to-edge in the XY-plane and numbered row-major from the top-left
corner. All lengths are meters, all angles radians; nothing here converts
units implicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from elaa.exceptions import DomainError


@dataclass(frozen=True)
class ArraySpec:
    """Planar array of ``num_antennas`` square antennas plus the wavelength.

    Parameters
    ----------
    num_antennas : int
        Antenna count N; must be a positive perfect square so the antennas
        tile an m x m grid (m = sqrt(N)).
    antenna_area : float
        Area A of one antenna in m^2 (antenna side is sqrt(A)).
    wavelength : float
        Carrier wavelength in meters.
    """

    num_antennas: int
    antenna_area: float
    wavelength: float

    def __post_init__(self):
        n = self.num_antennas
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise DomainError(f"num_antennas must be a positive integer, got {n!r}")
        m = math.isqrt(n)
        if m * m != n:
            raise DomainError(
                f"num_antennas must be a perfect square so the antennas tile a "
                f"sqrt(N) x sqrt(N) grid; got N={n} (sqrt(N)={math.sqrt(n):.4f})"
            )
        if not self.antenna_area > 0:
            raise DomainError(f"antenna_area must be > 0, got {self.antenna_area}")
        if not self.wavelength > 0:
            raise DomainError(f"wavelength must be > 0, got {self.wavelength}")

    @classmethod
    def from_total_area(cls, array_area, antenna_area, wavelength) -> "ArraySpec":
        """Build a spec for a target array area, rounding N down to a square.

        The antenna area is kept as given and the antenna count is the largest
        perfect square fitting in ``array_area``; the realized area is
        ``spec.array_area`` (<= the target).
        """
        if not array_area > 0 or not antenna_area > 0:
            raise DomainError("array_area and antenna_area must be > 0")
        m = int(math.floor(math.sqrt(array_area / antenna_area)))
        if m < 1:
            raise DomainError(
                f"array_area {array_area} is smaller than one antenna ({antenna_area})"
            )
        return cls(m * m, antenna_area, wavelength)

    @property
    def grid_size(self) -> int:
        """Antennas per row/column, m = sqrt(N)."""
        return math.isqrt(self.num_antennas)

    @property
    def antenna_side(self) -> float:
        """Antenna edge length a = sqrt(A)."""
        return math.sqrt(self.antenna_area)

    @property
    def antenna_diagonal(self) -> float:
        """Antenna diagonal D = sqrt(2A)."""
        return math.sqrt(2.0 * self.antenna_area)

    @property
    def array_side(self) -> float:
        """Array edge length sqrt(N*A)."""
        return self.antenna_side * self.grid_size

    @property
    def array_diagonal(self) -> float:
        """Array diagonal W = sqrt(2NA) = D*sqrt(N)."""
        return math.sqrt(2.0 * self.num_antennas * self.antenna_area)

    @property
    def array_area(self) -> float:
        """Total aperture area N*A."""
        return self.num_antennas * self.antenna_area


@dataclass(frozen=True)
class SourcePoint:
    """Point source at (x, y, z) with z > 0 in front of the XY-plane array."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not self.z > 0:
            raise DomainError(f"source must satisfy z > 0, got z={self.z}")

    @classmethod
    def from_polar(cls, distance, angle) -> "SourcePoint":
        """Source at range ``distance`` and azimuth ``angle`` in the XZ-plane.

        Maps to (d*sin(angle), 0, d*cos(angle)). Requires |angle| < pi/2
        strictly: the closed-form oblique gain involves tan(angle).
        """
        if not distance > 0:
            raise DomainError(f"distance must be > 0, got {distance}")
        if not abs(angle) < math.pi / 2:
            raise DomainError(
                f"|angle| must be < pi/2 strictly, got {angle} rad"
            )
        return cls(distance * math.sin(angle), 0.0, distance * math.cos(angle))

    @property
    def distance(self) -> float:
        """Range from the array center, ||p||."""
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class AntennaRegion:
    """Square integration cell of one antenna: center and side length."""

    index: int
    x: float
    y: float
    side: float

    @property
    def x_bounds(self) -> tuple[float, float]:
        return (self.x - self.side / 2, self.x + self.side / 2)

    @property
    def y_bounds(self) -> tuple[float, float]:
        return (self.y - self.side / 2, self.y + self.side / 2)

    @property
    def area(self) -> float:
        return self.side * self.side


def source_from_polar(distance, angle) -> SourcePoint:
    """Alias for :meth:`SourcePoint.from_polar`."""
    return SourcePoint.from_polar(distance, angle)


def antenna_center(spec: ArraySpec, n: int) -> tuple[float, float, float]:
    """Center (x_n, y_n, 0) of antenna ``n`` (1-based, row-major from top-left).

    x_n = -(m-1)*a/2 + a*((n-1) mod m)
    y_n =  (m-1)*a/2 - a*floor((n-1)/m)      with m = sqrt(N), a = sqrt(A).
    """
    if not 1 <= n <= spec.num_antennas:
        raise IndexError(
            f"antenna index {n} out of range 1..{spec.num_antennas}"
        )
    m = spec.grid_size
    a = spec.antenna_side
    k = n - 1
    x = -(m - 1) * a / 2 + a * (k % m)
    y = (m - 1) * a / 2 - a * (k // m)
    return (x, y, 0.0)


def antenna_centers(spec: ArraySpec) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized centers of all antennas, in index order (row-major)."""
    m = spec.grid_size
    a = spec.antenna_side
    k = np.arange(spec.num_antennas)
    x = -(m - 1) * a / 2 + a * (k % m)
    y = (m - 1) * a / 2 - a * (k // m)
    return x, y


def antenna_region(spec: ArraySpec, n: int) -> AntennaRegion:
    """Integration cell of antenna ``n``."""
    x, y, _ = antenna_center(spec, n)
    return AntennaRegion(index=n, x=x, y=y, side=spec.antenna_side)


def array_diagonals(spec: ArraySpec) -> tuple[float, float]:
    """(antenna diagonal D, array diagonal W) = (sqrt(2A), sqrt(2NA))."""
    return spec.antenna_diagonal, spec.array_diagonal
