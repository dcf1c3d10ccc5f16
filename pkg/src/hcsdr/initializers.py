"""Starting directions for the Hellinger-correlation search.

SIR, SAVE and directional regression (DR) estimate a single direction
from slice statistics of the whitened predictors; the leading eigenvector
of each method's kernel matrix is mapped back to the original predictor
scale.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import DataError, Dataset, HcsdrError, NumericError, SeedSpec, UnitDirection

LOW_SIGNAL = 1e-8


class SingularCovariance(NumericError):
    pass


class EmptySlice(HcsdrError, ValueError):
    pass


class LowSignalWarning(UserWarning):
    """The leading kernel eigenvalue is ~0; the direction is essentially arbitrary."""


@dataclass(frozen=True)
class SliceSpec:
    n_slices: int = 10

    def __post_init__(self):
        if self.n_slices < 2:
            raise ValueError("n_slices must be at least 2")

    @classmethod
    def default_for(cls, n: int) -> "SliceSpec":
        return cls(10 if n >= 100 else max(2, n // 20))


@dataclass(frozen=True)
class Whitening:
    mean: np.ndarray
    half_inverse: np.ndarray
    half: np.ndarray

    def apply(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=np.float64) - self.mean) @ self.half_inverse


def whiten(d: Dataset) -> tuple[Whitening, np.ndarray]:
    """Centre and decorrelate the predictors with the symmetric root of the
    inverse sample covariance (divisor n)."""
    x = d.x
    mean = x.mean(axis=0)
    xc = x - mean
    cov = xc.T @ xc / x.shape[0]
    cov = 0.5 * (cov + cov.T)
    evals, evecs = np.linalg.eigh(cov)
    if evals[-1] <= 0 or evals[0] <= 1e-10 * evals[-1]:
        raise SingularCovariance(
            f"sample covariance is (near) singular: eigenvalues in [{evals[0]:.3g}, {evals[-1]:.3g}]"
        )
    root = np.sqrt(evals)
    half_inverse = (evecs / root) @ evecs.T
    half = (evecs * root) @ evecs.T
    half_inverse = 0.5 * (half_inverse + half_inverse.T)
    half = 0.5 * (half + half.T)
    w = Whitening(mean, half_inverse, half)
    return w, xc @ half_inverse


def make_slices(y, spec: SliceSpec) -> list[np.ndarray]:
    """Equal-frequency slices of the observation indices ordered by ``y``."""
    order = np.argsort(np.asarray(y), kind="stable")
    slices = np.array_split(order, spec.n_slices)
    small = [len(s) for s in slices if len(s) < 2]
    if small:
        raise EmptySlice(
            f"{spec.n_slices} slices over {len(order)} observations leaves a slice with {small[0]} point(s)"
        )
    return slices


def _slice_moments(z, slices):
    n = z.shape[0]
    props = np.array([len(s) / n for s in slices])
    means = np.array([z[s].mean(axis=0) for s in slices])
    return props, means


def sir_kernel(z, slices) -> np.ndarray:
    props, means = _slice_moments(z, slices)
    return (means.T * props) @ means


def save_kernel(z, slices) -> np.ndarray:
    p = z.shape[1]
    eye = np.eye(p)
    props, _ = _slice_moments(z, slices)
    m = np.zeros((p, p))
    for w, s in zip(props, slices):
        zs = z[s]
        dev = zs - zs.mean(axis=0)
        a = eye - dev.T @ dev / len(s)
        m += w * a @ a
    return m


def dr_kernel(z, slices) -> np.ndarray:
    """Directional-regression kernel

    2 E[(E[ZZ'|Y] - I)^2] + 2 (E[E[Z|Y] E[Z|Y]'])^2
        + 2 E[E[Z|Y]' E[Z|Y]] E[E[Z|Y] E[Z|Y]']
    """
    p = z.shape[1]
    eye = np.eye(p)
    props, means = _slice_moments(z, slices)
    second = np.zeros((p, p))
    for w, s in zip(props, slices):
        zs = z[s]
        a = zs.T @ zs / len(s) - eye
        second += w * a @ a
    mm = (means.T * props) @ means
    trace_term = float(props @ np.sum(means * means, axis=1))
    return 2.0 * second + 2.0 * mm @ mm + 2.0 * trace_term * mm


def _leading_direction(kernel, w: Whitening, method: str) -> UnitDirection:
    kernel = 0.5 * (kernel + kernel.T)
    evals, evecs = np.linalg.eigh(kernel)
    if evals[-1] < LOW_SIGNAL:
        warnings.warn(
            f"{method}: leading kernel eigenvalue {evals[-1]:.3g} is negligible", LowSignalWarning, stacklevel=3
        )
    return UnitDirection.from_vector(w.half_inverse @ evecs[:, -1]).canonical_sign()


_KERNELS = {"sir": sir_kernel, "save": save_kernel, "dr": dr_kernel}


def inverse_regression_direction(d: Dataset, method: str, s: SliceSpec | None = None) -> UnitDirection:
    method = method.lower()
    if method not in _KERNELS:
        raise ValueError(f"unknown inverse-regression method {method!r}")
    s = s or SliceSpec.default_for(d.n)
    w, z = whiten(d)
    slices = make_slices(d.y, s)
    return _leading_direction(_KERNELS[method](z, slices), w, method.upper())


def sir_direction(d: Dataset, s: SliceSpec | None = None) -> UnitDirection:
    return inverse_regression_direction(d, "sir", s)


def save_direction(d: Dataset, s: SliceSpec | None = None) -> UnitDirection:
    return inverse_regression_direction(d, "save", s)


def dr_direction(d: Dataset, s: SliceSpec | None = None) -> UnitDirection:
    return inverse_regression_direction(d, "dr", s)


def random_direction(p: int, seed: SeedSpec) -> UnitDirection:
    """Uniform draw on S^{p-1} (normalized standard normal vector)."""
    if p < 2:
        raise ValueError("p must be at least 2")
    rng = seed.child("random-direction").generator()
    while True:
        v = rng.standard_normal(p)
        if np.linalg.norm(v) > 1e-8:
            return UnitDirection.from_vector(v)


def read_vector(path) -> np.ndarray:
    """Read a whitespace- or comma-separated vector from a text file."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc}") from None
    tokens = text.replace(",", " ").split()
    try:
        values = [float(t) for t in tokens]
    except ValueError as exc:
        raise DataError(f"{path}: cannot parse direction: {exc}") from None
    if len(values) < 2:
        raise DataError(f"{path}: need at least 2 coordinates, found {len(values)}")
    return np.array(values)


def read_direction_file(path) -> UnitDirection:
    """Read a start vector from a text file and renormalize it."""
    return UnitDirection.from_vector(read_vector(path))
