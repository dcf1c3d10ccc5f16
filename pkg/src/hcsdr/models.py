"""Synthetic single-index models and predictor generators."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import HcsdrError, SeedSpec

P = 10
NOISE_SD = 0.2

LINKS = {
    "I": lambda t: t * t,
    "II": np.exp,
    "III": lambda t: 5.0 * np.sin(t),
}

SPARSE_ETA = {
    "I": (1, -1, 0, 0, 0, 0, 0, 0, 0, 0),
    "II": (1, 1, 1, 1, 1, 0, 0, 0, 0, 0),
    "III": (1, 1, 0, 0, 0, 0, 0, 0, 0, 0),
}

_NONSPARSE_ETA = {
    "I": (1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
    "II": (1, 1, 1, -1, -1, -1, -1, 1, 1, -1),
    "III": (3, -1, 4, -2, -4, 5, 1, -3, -5, 2),
}


class UnknownModel(HcsdrError, ValueError):
    pass


def _check_model(model: str) -> str:
    key = str(model).upper()
    if key not in LINKS:
        raise UnknownModel(f"unknown model {model!r}; expected one of I, II, III")
    return key


@dataclass(frozen=True)
class ModelSpec:
    model: str
    eta: tuple
    noise_sd: float = NOISE_SD
    predictors: str = "normal"

    def __post_init__(self):
        object.__setattr__(self, "model", _check_model(self.model))
        eta = tuple(float(v) for v in self.eta)
        if not any(eta):
            raise ValueError("eta must be nonzero")
        if self.noise_sd < 0:
            raise ValueError("noise_sd must be nonnegative")
        if self.predictors not in ("normal", "nonnormal"):
            raise ValueError(f"unknown predictor kind {self.predictors!r}")
        object.__setattr__(self, "eta", eta)

    @classmethod
    def standard(cls, model: str, predictors: str = "normal", sparse: bool = True) -> "ModelSpec":
        key = _check_model(model)
        eta = SPARSE_ETA[key] if sparse else tuple(nonsparse_eta(key))
        return cls(key, eta, NOISE_SD, predictors)

    @property
    def unit_eta(self) -> np.ndarray:
        e = np.asarray(self.eta)
        return e / np.linalg.norm(e)


def nonsparse_eta(model: str) -> np.ndarray:
    """Dense true directions used for the non-sparse variants, unit-normalized."""
    e = np.asarray(_NONSPARSE_ETA[_check_model(model)], dtype=np.float64)
    return e / np.linalg.norm(e)


def gen_predictors(kind: str, n: int, seed: SeedSpec, exp_mean: bool = False) -> np.ndarray:
    """Draw an (n, 10) predictor matrix.

    ``"normal"``: i.i.d. N(0, 1) columns.  ``"nonnormal"``: Exp(2), Exp(4),
    chi^2(5), t(15), t(3), then five N(0, 1) columns.  Exponentials use
    the rate convention (mean 1/2 and 1/4) unless ``exp_mean`` is set, in
    which case the parameter is read as the mean.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = seed.child("predictors", kind).generator()
    if kind == "normal":
        return rng.standard_normal((n, P))
    if kind != "nonnormal":
        raise ValueError(f"unknown predictor kind {kind!r}")
    scale2, scale4 = (2.0, 4.0) if exp_mean else (0.5, 0.25)
    cols = [
        rng.exponential(scale2, n),
        rng.exponential(scale4, n),
        rng.chisquare(5, n),
        rng.standard_t(15, n),
        rng.standard_t(3, n),
    ]
    return np.column_stack(cols + [rng.standard_normal((n, P - 5))])


def gen_response(x, spec: ModelSpec, seed: SeedSpec) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape[1] != len(spec.eta):
        raise ValueError(f"x has {x.shape[1]} columns but eta has {len(spec.eta)} entries")
    index = x @ np.asarray(spec.eta)
    noise = seed.child("noise").generator().standard_normal(x.shape[0])
    return LINKS[spec.model](index) + spec.noise_sd * noise
