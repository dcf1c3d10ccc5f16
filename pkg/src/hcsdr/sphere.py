"""Hyperspherical angle parametrization of the unit sphere S^{p-1}.

``phi[k]`` for ``k < p - 2`` lies in [0, pi]; the last angle lies in
[0, 2 pi).  Two-argument arctangents are used throughout so the sign of
every coordinate survives the round trip.
"""
from __future__ import annotations

import math

import numpy as np

from .core import SphereAngles, UnitDirection

TWO_PI = 2.0 * math.pi


def angles_to_array(phi) -> np.ndarray:
    """Unit vector for an arbitrary real angle vector (no wrapping needed)."""
    phi = np.asarray(phi, dtype=np.float64).ravel()
    sines = np.concatenate(([1.0], np.cumprod(np.sin(phi))))
    cosines = np.concatenate((np.cos(phi), [1.0]))
    return sines * cosines


def to_angles(alpha: UnitDirection) -> SphereAngles:
    a = np.asarray(alpha.coords, dtype=np.float64) + 0.0  # drop negative zeros
    p = a.size
    # tail[k] = ||a[k:]||, accumulated from the end for accuracy
    tail = np.empty(p + 1)
    tail[p] = 0.0
    for k in range(p - 1, -1, -1):
        tail[k] = math.hypot(tail[k + 1], a[k])
    phi = np.empty(p - 1)
    for k in range(p - 2):
        phi[k] = math.atan2(tail[k + 1], a[k])
    last = math.atan2(a[p - 1], a[p - 2])
    if last < 0.0:
        last += TWO_PI
        if last >= TWO_PI:
            last = 0.0
    phi[p - 2] = last
    return SphereAngles(phi)


def from_angles(phi: SphereAngles) -> UnitDirection:
    return UnitDirection.from_vector(angles_to_array(phi.phi))
