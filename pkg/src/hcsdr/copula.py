"""Empirical-copula estimators of the Bhattacharyya affinity and the
Hellinger correlation for a bivariate sample.

The affinity is estimated from nearest-neighbour distances between
pseudo-observations (ranks divided by n + 1)::

    B_n = 2 sqrt(n - 1) / n * sum_i R_i

and mapped to the Hellinger correlation by :func:`h_map`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .core import DomainError, ShapeMismatch, TooFewRows

B_FLOOR = 1e-6


@dataclass(frozen=True)
class PseudoSample:
    """Rank-transformed points, shape (n, 2), entries in (0, 1)."""

    u: np.ndarray

    @property
    def n(self) -> int:
        return self.u.shape[0]


@dataclass(frozen=True)
class AffinityEstimate:
    b_hat_raw: float
    b_hat: float
    h_hat: float


@numba.njit(cache=True)
def midranks(v):
    """1-based ranks with ties replaced by the average of their positions."""
    n = v.size
    order = np.argsort(v, kind="mergesort")
    r = np.empty(n, dtype=np.float64)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and v[order[j + 1]] == v[order[i]]:
            j += 1
        avg = 0.5 * (i + j) + 1.0
        for k in range(i, j + 1):
            r[order[k]] = avg
        i = j + 1
    return r


@numba.njit(cache=True)
def _nn_radii_sweep(ux, uy):
    # Sort by the first coordinate and scan outwards from each point until the
    # horizontal gap alone exceeds the best squared distance found so far.
    # Visits a superset of the candidates that can beat the running minimum,
    # so the result equals the all-pairs minimum exactly.
    n = ux.size
    order = np.argsort(ux, kind="mergesort")
    sx = ux[order]
    sy = uy[order]
    out = np.empty(n, dtype=np.float64)
    for a in range(n):
        best = np.inf
        b = a - 1
        while b >= 0:
            dx = sx[a] - sx[b]
            dx2 = dx * dx
            if dx2 > best:
                break
            dy = sy[a] - sy[b]
            d2 = dx2 + dy * dy
            if d2 < best:
                best = d2
            b -= 1
        b = a + 1
        while b < n:
            dx = sx[a] - sx[b]
            dx2 = dx * dx
            if dx2 > best:
                break
            dy = sy[a] - sy[b]
            d2 = dx2 + dy * dy
            if d2 < best:
                best = d2
            b += 1
        out[order[a]] = math.sqrt(best)
    return out


@numba.njit(cache=True)
def _b_raw_from_ranks(rx, ry):
    n = rx.size
    scale = 1.0 / (n + 1.0)
    radii = _nn_radii_sweep(rx * scale, ry * scale)
    total = 0.0
    for i in range(n):
        total += radii[i]
    return 2.0 * math.sqrt(n - 1.0) / n * total


def _as_pair(x, y):
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    y = np.ascontiguousarray(y, dtype=np.float64).ravel()
    if x.size != y.size:
        raise ShapeMismatch(f"x has {x.size} entries but y has {y.size}")
    if x.size < 2:
        raise TooFewRows(f"need at least 2 observations, got {x.size}")
    return x, y


def rank_transform(x, y) -> PseudoSample:
    """Pseudo-observations ``(rank(x_i), rank(y_i)) / (n + 1)`` with midranks for ties."""
    x, y = _as_pair(x, y)
    n = x.size
    u = np.column_stack((midranks(x), midranks(y))) / (n + 1.0)
    return PseudoSample(u)


def nn_radii(u: PseudoSample) -> np.ndarray:
    """Euclidean distance from each pseudo-observation to its nearest other point."""
    pts = np.ascontiguousarray(u.u, dtype=np.float64)
    if pts.shape[0] < 2:
        raise TooFewRows("need at least 2 points for nearest-neighbour radii")
    return _nn_radii_sweep(np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1]))


def nn_radii_bruteforce(u: PseudoSample) -> np.ndarray:
    """All-pairs O(n^2) reference for :func:`nn_radii`."""
    pts = np.asarray(u.u, dtype=np.float64)
    dx = pts[:, 0][:, None] - pts[:, 0][None, :]
    dy = pts[:, 1][:, None] - pts[:, 1][None, :]
    d2 = dx * dx + dy * dy
    np.fill_diagonal(d2, np.inf)
    return np.sqrt(d2.min(axis=1))


def clamp_b(b_raw: float) -> float:
    return min(max(b_raw, B_FLOOR), 1.0)


def h_map(b: float) -> float:
    """Hellinger correlation as a function of the Bhattacharyya affinity.

    Evaluates ``2/b^2 * sqrt(b^4 + sqrt(4 - 3 b^4) - 2)`` in the
    rationalized form ``2 sqrt((1 - b^4) / (sqrt(4 - 3 b^4) + 2 - b^4))``,
    which avoids cancellation as b approaches 1.
    """
    b = float(b)
    if not (0.0 < b <= 1.0):
        raise DomainError(f"affinity must lie in (0, 1], got {b!r}")
    b2 = b * b
    b4 = b2 * b2
    one_minus_b4 = (1.0 - b) * (1.0 + b) * (1.0 + b2)  # 1 - b is exact near b = 1
    return min(1.0, 2.0 * math.sqrt(one_minus_b4 / (math.sqrt(4.0 - 3.0 * b4) + 2.0 - b4)))


def _estimate(b_raw: float) -> AffinityEstimate:
    b = clamp_b(b_raw)
    return AffinityEstimate(b_hat_raw=b_raw, b_hat=b, h_hat=h_map(b))


def bhattacharyya_hat(x, y) -> AffinityEstimate:
    """Nearest-neighbour estimate of the copula Bhattacharyya affinity.

    ``b_hat_raw`` is the unclamped estimate and may exceed 1 in small
    samples; ``b_hat`` is clamped to ``[1e-6, 1]`` before mapping.
    """
    x, y = _as_pair(x, y)
    return _estimate(float(_b_raw_from_ranks(midranks(x), midranks(y))))


def hellinger_hat(x, y) -> AffinityEstimate:
    """Empirical Hellinger correlation; ``.h_hat`` holds the value in [0, 1]."""
    x, y = _as_pair(x, y)
    if x.size < 3:
        raise TooFewRows(f"need at least 3 observations, got {x.size}")
    return bhattacharyya_hat(x, y)


def closed_form_normal(rho: float) -> tuple[float, float]:
    """Population (affinity, Hellinger correlation) for a bivariate normal."""
    rho = float(rho)
    if not abs(rho) < 1.0:
        raise DomainError(f"|rho| must be < 1, got {rho!r}")
    r2 = rho * rho
    b = 2.0 * (1.0 - r2) ** 0.25 / math.sqrt(4.0 - r2)
    return b, h_map(b)
