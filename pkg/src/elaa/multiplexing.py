"""Depth-domain multi-user scenarios: focal ladder, ZF, waterfilling, sum SE.

Users share one angular direction (broadside) and are separated only by
distance. The focal ladder places them so consecutive 3 dB depth-of-focus
intervals abut, which keeps the stacked channel matrix well conditioned and
lets zero-forcing carve the depth domain into independent streams.
Noise power defaults to 1; transmit powers are expressed relative to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from elaa import field
from elaa.exceptions import (
    DegenerateChannelError,
    DomainError,
    NoSignalError,
    SingularChannelError,
)
from elaa.geometry import ArraySpec, SourcePoint
from elaa.quadrature import QuadratureConfig
from elaa.utils import db_power

#: Relative singular-value floor below which the stacked channel matrix is
#: treated as rank deficient.
RANK_TOLERANCE = 1e-12


@dataclass(frozen=True)
class FocalLadder:
    """K focal distances d_1 = d_fa, d_k = d_fa / (20 (k-1)) for k >= 2.

    The choice makes the 3 dB interval of each beam end where the next one
    begins, with the k = 2 beam ending at d_fa / 10 where far-field beams
    start.
    """

    d_fa: float
    distances: np.ndarray

    @property
    def count(self) -> int:
        return self.distances.shape[0]


@dataclass(frozen=True)
class PrecoderSet:
    """Unit-norm per-user precoding vectors with their effective gains."""

    vectors: np.ndarray  # (K, N), row k is w_k
    scheme: str  # "MF" | "ZF"
    effective_gains: np.ndarray  # |h_k^T w_k|^2 per user


@dataclass(frozen=True)
class SEResult:
    """Spectral-efficiency outcome of one multi-user scenario."""

    scheme: str  # "ZF" | "scheduling"
    reference_snr_db: float
    per_user_se: np.ndarray  # bit/s/Hz
    sum_se: float  # bit/s/Hz
    power_allocation: np.ndarray  # per-user transmit power (ZF); slot power otherwise
    channel_gains: np.ndarray  # ||h_k||^2 per user


def focal_ladder(d_fa, count) -> FocalLadder:
    """Build the K-point focal ladder for a given whole-array phase boundary."""
    if not d_fa > 0:
        raise DomainError(f"d_fa must be > 0, got {d_fa}")
    if not isinstance(count, (int, np.integer)) or count < 1:
        raise DomainError(f"count must be a positive integer, got {count!r}")
    distances = [float(d_fa)]
    distances += [d_fa / (20.0 * (k - 1)) for k in range(2, count + 1)]
    return FocalLadder(d_fa=float(d_fa), distances=np.array(distances))


def mf_precoder(h) -> np.ndarray:
    """Matched-filter precoder conj(h)/||h||, maximizing single-user SNR.

    Satisfies h^T w = ||h||, so the downlink SNR at full power equals the
    uplink combining SNR ||h||^2 P / sigma^2 exactly.
    """
    h = np.asarray(h, dtype=np.complex128)
    norm = np.linalg.norm(h)
    if norm == 0:
        raise DegenerateChannelError("channel vector has zero norm")
    return np.conj(h) / norm


def zf_precoders(channel_matrix) -> PrecoderSet:
    """Zero-forcing precoders from the K x N stacked channel matrix.

    Row k of the result is the unit-norm w_k built from the right
    pseudo-inverse of H (rows h_k^T), so h_j^T w_k = 0 for j != k. The
    effective per-user gain |h_k^T w_k|^2 is reported alongside.
    """
    h = np.asarray(channel_matrix, dtype=np.complex128)
    if h.ndim != 2:
        raise DomainError(f"channel matrix must be 2-D, got shape {h.shape}")
    k, n = h.shape
    if k > n:
        raise DomainError(f"need at most as many users as antennas, got K={k} > N={n}")
    singulars = np.linalg.svd(h, compute_uv=False)
    if singulars[0] == 0 or singulars[-1] < RANK_TOLERANCE * singulars[0]:
        i, j = _most_collinear_pair(h)
        raise SingularChannelError(
            f"channel matrix is numerically rank deficient (users {i + 1} and "
            f"{j + 1} are collinear to within {RANK_TOLERANCE:g})",
            user_pair=(i + 1, j + 1),
        )
    gram = h @ h.conj().T
    pinv_cols = h.conj().T @ np.linalg.inv(gram)  # (N, K), H @ pinv_cols = I
    norms = np.linalg.norm(pinv_cols, axis=0)
    vectors = (pinv_cols / norms).T
    gains = np.abs(np.einsum("kn,kn->k", h, vectors)) ** 2
    return PrecoderSet(vectors=vectors, scheme="ZF", effective_gains=gains)


def _most_collinear_pair(h):
    norms = np.linalg.norm(h, axis=1)
    norms = np.where(norms == 0, 1.0, norms)
    unit = h / norms[:, None]
    corr = np.abs(unit @ unit.conj().T)
    np.fill_diagonal(corr, -1.0)
    flat = int(np.argmax(corr))
    return sorted(divmod(flat, h.shape[0]))


def waterfilling(gains, total_power, noise_power=1.0) -> np.ndarray:
    """Optimal power split maximizing sum log2(1 + g_k p_k / sigma^2).

    Exact KKT active-set solve: p_k = max(0, mu - sigma^2 / g_k) with the
    water level mu chosen so the powers sum to ``total_power``. Users with
    zero gain get zero power; all-zero gains are an error.
    """
    g = np.asarray(gains, dtype=np.float64)
    if np.any(g < 0):
        raise DomainError(f"gains must be >= 0, got {gains}")
    if not total_power > 0:
        raise DomainError(f"total_power must be > 0, got {total_power}")
    if not np.any(g > 0):
        raise NoSignalError("all effective gains are zero")
    p = np.zeros_like(g)
    active = np.flatnonzero(g > 0)
    floors = noise_power / g[active]  # water must exceed these
    order = np.argsort(floors)
    sorted_floors = floors[order]
    # Highest k with mu(k) = (P + sum of k smallest floors)/k above floor k.
    csum = np.cumsum(sorted_floors)
    counts = np.arange(1, len(sorted_floors) + 1)
    levels = (total_power + csum) / counts
    feasible = levels > sorted_floors - 1e-15 * np.abs(sorted_floors)
    k = int(np.max(np.flatnonzero(feasible))) + 1
    mu = levels[k - 1]
    p[active] = np.maximum(0.0, mu - floors)
    return p


def dof_limit(array_area, wavelength) -> float:
    """Spatial degrees-of-freedom bound pi * area / wavelength^2."""
    if not array_area > 0 or not wavelength > 0:
        raise DomainError("array_area and wavelength must be > 0")
    return math.pi * array_area / wavelength**2


def ladder_channels(
    spec: ArraySpec,
    ladder: FocalLadder,
    mode: str = "hybrid",
    quad: QuadratureConfig | None = None,
    threads: int = 1,
) -> np.ndarray:
    """Stacked K x N channel matrix for broadside users at ladder distances."""
    rows = [
        field.channel_vector(
            spec, SourcePoint(0.0, 0.0, float(d)), mode=mode, quad=quad, threads=threads
        ).coefficients
        for d in ladder.distances
    ]
    return np.array(rows)


def sum_se(
    spec: ArraySpec,
    ladder: FocalLadder,
    scheme: str,
    snr_ref_db: float,
    mode: str = "hybrid",
    quad: QuadratureConfig | None = None,
    noise_power: float = 1.0,
    threads: int = 1,
    channel_matrix: np.ndarray | None = None,
) -> SEResult:
    """Sum spectral efficiency of the ladder users under one scheme.

    The power budget is calibrated so the outermost (weakest) user reaches
    ``snr_ref_db`` when allocated the full budget with MF. scheme "ZF":
    zero-forcing with waterfilling across users sharing the budget.
    scheme "scheduling": each user gets a 1/K time slot at full power with
    MF (no power allocation across slots).

    ``channel_matrix`` may be supplied to reuse channels across reference
    SNR points; otherwise it is generated with :func:`ladder_channels`.
    """
    if scheme not in ("ZF", "scheduling"):
        raise DomainError(f"scheme must be 'ZF' or 'scheduling', got {scheme!r}")
    h = (
        ladder_channels(spec, ladder, mode=mode, quad=quad, threads=threads)
        if channel_matrix is None
        else np.asarray(channel_matrix, dtype=np.complex128)
    )
    norms2 = np.sum(np.abs(h) ** 2, axis=1)
    weakest = float(np.min(norms2))
    if weakest == 0:
        raise DegenerateChannelError("a ladder user has zero channel norm")
    budget = float(db_power(snr_ref_db)) * noise_power / weakest
    k = h.shape[0]
    if scheme == "scheduling":
        per_user = np.log2(1.0 + norms2 * budget / noise_power) / k
        return SEResult(
            scheme=scheme,
            reference_snr_db=float(snr_ref_db),
            per_user_se=per_user,
            sum_se=float(np.sum(per_user)),
            power_allocation=np.full(k, budget),
            channel_gains=norms2,
        )
    precoders = zf_precoders(h)
    allocation = waterfilling(precoders.effective_gains, budget, noise_power)
    per_user = np.log2(1.0 + precoders.effective_gains * allocation / noise_power)
    return SEResult(
        scheme=scheme,
        reference_snr_db=float(snr_ref_db),
        per_user_se=per_user,
        sum_se=float(np.sum(per_user)),
        power_allocation=allocation,
        channel_gains=norms2,
    )
