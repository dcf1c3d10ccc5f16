"""Shared domain types, validation and seeding.

Matrices are stored row-major by observation: ``x[i]`` is the i-th
observation, ``x[:, j]`` the j-th predictor.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

NORM_TOL = 1e-10
MIN_NORM, MAX_NORM = 1e-8, 1e8


class HcsdrError(Exception):
    """Base class for every error raised by this package."""


class DataError(HcsdrError, ValueError):
    """Malformed or unusable input data."""


class NonFinite(DataError):
    pass


class TooFewRows(DataError):
    pass


class TooFewCols(DataError):
    pass


class ShapeMismatch(DataError):
    pass


class NumericError(HcsdrError, ArithmeticError):
    """A numeric routine could not produce a meaningful answer."""


class DomainError(NumericError, ValueError):
    pass


class DegenerateDirection(NumericError, ValueError):
    pass


@dataclass(frozen=True)
class Dataset:
    x: np.ndarray
    y: np.ndarray

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


def validate_dataset(x, y) -> Dataset:
    """Check shapes and finiteness and return an immutable :class:`Dataset`.

    Raises
    ------
    ShapeMismatch
        ``x`` is not 2-D, ``y`` is not 1-D, or their lengths differ.
    TooFewRows, TooFewCols
        n < 3 or p < 2.
    NonFinite
        Any NaN or infinite entry.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 2:
        raise ShapeMismatch(f"x must be 2-D, got shape {x.shape}")
    if y.ndim != 1:
        raise ShapeMismatch(f"y must be 1-D, got shape {y.shape}")
    if x.shape[0] != y.shape[0]:
        raise ShapeMismatch(f"x has {x.shape[0]} rows but y has {y.shape[0]} entries")
    if x.shape[0] < 3:
        raise TooFewRows(f"need at least 3 observations, got {x.shape[0]}")
    if x.shape[1] < 2:
        raise TooFewCols(f"need at least 2 predictors, got {x.shape[1]}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise NonFinite("data contains NaN or infinite entries")
    return Dataset(_frozen(x), _frozen(y))


@dataclass(frozen=True)
class UnitDirection:
    """A point on the unit sphere in R^p.

    Construct through :meth:`from_vector`, which renormalizes.
    """

    coords: np.ndarray

    def __post_init__(self):
        c = _frozen(self.coords)
        if c.ndim != 1 or c.size < 1:
            raise DegenerateDirection(f"direction must be a non-empty vector, got shape {c.shape}")
        if abs(np.linalg.norm(c) - 1.0) > NORM_TOL:
            raise DegenerateDirection("coords are not unit norm; use UnitDirection.from_vector")
        object.__setattr__(self, "coords", c)

    @classmethod
    def from_vector(cls, v) -> "UnitDirection":
        v = np.asarray(v, dtype=np.float64).ravel()
        if not np.all(np.isfinite(v)):
            raise DegenerateDirection("direction contains non-finite entries")
        norm = np.linalg.norm(v)
        if not (MIN_NORM <= norm <= MAX_NORM):
            raise DegenerateDirection(f"cannot normalize a vector of norm {norm:g}")
        return cls(v / norm)

    @property
    def p(self) -> int:
        return self.coords.size

    def __neg__(self) -> "UnitDirection":
        return UnitDirection(-self.coords)

    def canonical_sign(self) -> "UnitDirection":
        """Flip so that the first nonzero coordinate is positive."""
        nz = np.flatnonzero(self.coords)
        if nz.size and self.coords[nz[0]] < 0:
            return -self
        return self


@dataclass(frozen=True)
class SphereAngles:
    phi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "phi", _frozen(np.ravel(self.phi)))

    @property
    def p(self) -> int:
        return self.phi.size + 1


@dataclass(frozen=True)
class FitResult:
    direction: UnitDirection
    hellinger: float
    bhattacharyya: float
    initializer: str
    evaluations: int
    stage_trace: tuple = field(default_factory=tuple)
    start: UnitDirection | None = None
    bhattacharyya_raw: float = float("nan")


def _stable_int(label) -> int:
    if isinstance(label, (int, np.integer)):
        return int(label)
    digest = hashlib.sha256(str(label).encode()).digest()
    return int.from_bytes(digest[:8], "little")


@dataclass(frozen=True)
class SeedSpec:
    """Key for an independent random stream.

    Streams are derived with :class:`numpy.random.SeedSequence` so that a
    given ``(master_seed, replication_index, labels)`` always yields the
    same generator regardless of how many other streams were drawn.
    """

    master_seed: int
    replication_index: int = 0
    labels: tuple = ()

    def __post_init__(self):
        if not (0 <= int(self.master_seed) < 2**64):
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if int(self.replication_index) < 0:
            raise ValueError("replication_index must be nonnegative")

    def child(self, *labels) -> "SeedSpec":
        return SeedSpec(self.master_seed, self.replication_index, self.labels + tuple(labels))

    def seed_sequence(self) -> np.random.SeedSequence:
        key = (int(self.replication_index),) + tuple(_stable_int(l) for l in self.labels)
        return np.random.SeedSequence(int(self.master_seed), spawn_key=key)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed_sequence()))
