"""Subspace distance and predictive evaluation of an estimated direction."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import HcsdrError, ShapeMismatch, UnitDirection


class DimensionMismatch(ShapeMismatch):
    pass


class LengthMismatch(ShapeMismatch):
    pass


class IllConditionedWarning(UserWarning):
    """A local design matrix was rank deficient; the local mean was used."""


@dataclass(frozen=True)
class ProjectionMatrix:
    m: np.ndarray


def projection_matrix(v: UnitDirection) -> ProjectionMatrix:
    c = v.coords
    return ProjectionMatrix(np.outer(c, c))


def subspace_delta(a: UnitDirection, b: UnitDirection) -> float:
    """Spectral norm of ``P_a - P_b``.

    For two lines the difference has eigenvalues ``+-sin(theta)`` (and
    zeros), so this equals ``|sin theta|`` and lies in [0, 1].
    """
    if a.p != b.p:
        raise DimensionMismatch(f"directions have {a.p} and {b.p} coordinates")
    diff = projection_matrix(a).m - projection_matrix(b).m
    return float(np.max(np.abs(np.linalg.eigvalsh(diff))))


def align_sign(estimate: UnitDirection, reference: UnitDirection) -> UnitDirection:
    """Return ``estimate`` or ``-estimate``, whichever points towards ``reference``.

    A zero inner product leaves ``estimate`` unchanged.
    """
    if estimate.p != reference.p:
        raise DimensionMismatch(f"directions have {estimate.p} and {reference.p} coordinates")
    if float(estimate.coords @ reference.coords) < 0.0:
        return -estimate
    return estimate


@dataclass(frozen=True)
class SmootherSpec:
    """Local quadratic regression with uniform weights.

    Each query point is fitted on the ``ceil(span * n_train)`` training
    points nearest to it in the index variable.
    """

    span: float = 0.75
    degree: int = 2
    weight: str = "uniform"

    def __post_init__(self):
        if not (0.0 < self.span <= 1.0):
            raise ValueError("span must lie in (0, 1]")
        if self.degree != 2:
            raise ValueError("only degree 2 is supported")
        if self.weight != "uniform":
            raise ValueError("only uniform weights are supported")

    def neighbours(self, n_train: int) -> int:
        k = min(n_train, math.ceil(self.span * n_train - 1e-12))
        if k < 6:
            raise HcsdrError(f"span {self.span} over {n_train} training points gives {k} < 6 neighbours")
        return k


def local_quadratic_predict(train_z, train_y, spec: SmootherSpec, query_z) -> np.ndarray:
    train_z = np.asarray(train_z, dtype=np.float64).ravel()
    train_y = np.asarray(train_y, dtype=np.float64).ravel()
    query_z = np.atleast_1d(np.asarray(query_z, dtype=np.float64)).ravel()
    if train_z.size != train_y.size:
        raise LengthMismatch(f"train_z has {train_z.size} entries but train_y has {train_y.size}")
    k = spec.neighbours(train_z.size)
    out = np.empty(query_z.size)
    flagged = 0
    for i, q in enumerate(query_z):
        dist = np.abs(train_z - q)
        idx = np.argsort(dist, kind="stable")[:k]
        t = train_z[idx] - q
        design = np.column_stack((np.ones(k), t, t * t))
        coef, _, rank, _ = np.linalg.lstsq(design, train_y[idx], rcond=None)
        if rank < 3:
            out[i] = train_y[idx].mean()
            flagged += 1
        else:
            out[i] = coef[0]
    if flagged:
        warnings.warn(f"{flagged} query point(s) fell back to the local mean", IllConditionedWarning, stacklevel=2)
    return out


def test_mse(pred, truth) -> float:
    pred = np.asarray(pred, dtype=np.float64).ravel()
    truth = np.asarray(truth, dtype=np.float64).ravel()
    if pred.size != truth.size:
        raise LengthMismatch(f"{pred.size} predictions for {truth.size} targets")
    return float(np.mean((pred - truth) ** 2))


test_mse.__test__ = False  # keep pytest from collecting it
