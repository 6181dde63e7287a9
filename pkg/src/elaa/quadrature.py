"""Gauss-Legendre quadrature configuration and node caching."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class QuadratureConfig:
    """Adaptive tensor-product Gauss-Legendre settings.

    Orders start at ``initial order`` (at least ``nodes_per_wavelength``
    nodes per wavelength along each cell axis, to resolve the oscillatory
    phase) and double until two successive estimates agree to ``rtol``
    relative, or ``max_order`` is exceeded.
    """

    rtol: float = 1e-9
    min_order: int = 4
    max_order: int = 4096
    nodes_per_wavelength: int = 8

    def initial_order(self, cell_side, wavelength) -> int:
        need = math.ceil(self.nodes_per_wavelength * cell_side / wavelength)
        return max(self.min_order, need)


DEFAULT_QUADRATURE = QuadratureConfig()


@lru_cache(maxsize=64)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]; cached, arrays are read-only."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def graded_edges(inner, outer) -> np.ndarray:
    """Panel edges [0, c, 2c, 4c, ..., outer] geometrically graded from 0.

    ``inner`` sets the first panel scale (clamped to ``outer``); used to
    integrate smooth integrands that are peaked at the origin with
    characteristic scale ``inner`` over [0, outer].
    """
    if not outer > 0:
        raise ValueError(f"outer must be > 0, got {outer}")
    c = min(inner, outer)
    edges = [0.0, c]
    while edges[-1] < outer:
        edges.append(min(2 * edges[-1], outer))
    return np.array(edges)
