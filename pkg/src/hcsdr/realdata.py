"""CSV loading and the train/test predictive protocol for real data."""
from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np

from .core import DataError, SeedSpec, UnitDirection, validate_dataset
from .evaluation import SmootherSpec, local_quadratic_predict, test_mse
from .optimizer import fit_best, initial_direction


def read_table(path) -> tuple[list[str], np.ndarray]:
    """Read a numeric CSV with a header row.

    Errors name the file and the 1-based line number of the offending row.
    """
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: file is empty") from None
        rows = []
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise DataError(f"{path}:{line}: expected {len(header)} fields, found {len(row)}")
            try:
                rows.append([float(c) for c in row])
            except ValueError:
                bad = next(c for c in row if not _is_float(c))
                raise DataError(f"{path}:{line}: non-numeric value {bad!r}") from None
    if not rows:
        raise DataError(f"{path}: no data rows")
    return header, np.array(rows, dtype=np.float64)


def _is_float(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def select_columns(header, table, target: str, drop=()) -> tuple[np.ndarray, np.ndarray, list[str]]:
    if target not in header:
        raise DataError(f"target column {target!r} not found; columns are {header}")
    missing = [c for c in drop if c not in header]
    if missing:
        raise DataError(f"cannot drop unknown column(s) {missing}")
    keep = [i for i, h in enumerate(header) if h != target and h not in drop]
    names = [header[i] for i in keep]
    return table[:, keep], table[:, header.index(target)], names


def load_dataset(path, target: str, drop=()):
    header, table = read_table(path)
    x, y, names = select_columns(header, table, target, drop)
    return validate_dataset(x, y), names


def jitter(x, scale: float, seed: SeedSpec) -> np.ndarray:
    """Add seeded Gaussian noise of ``scale`` column standard deviations (tie breaking)."""
    x = np.asarray(x, dtype=np.float64)
    if scale <= 0:
        return x
    sd = x.std(axis=0)
    sd[sd == 0] = 1.0
    return x + scale * sd * seed.child("jitter").generator().standard_normal(x.shape)


@dataclass(frozen=True)
class RealResult:
    init: str
    mse_raw: float
    mse_hc: float
    direction_raw: UnitDirection
    direction_hc: UnitDirection
    hellinger_hc: float


def _standardize(train, test):
    mean = train.mean(axis=0)
    sd = train.std(axis=0)
    if np.any(sd == 0):
        raise DataError("a training column is constant and cannot be standardized")
    return (train - mean) / sd, (test - mean) / sd


def split_indices(n: int, train_size: int, seed: SeedSpec):
    if not (3 <= train_size < n):
        raise DataError(f"train_size must be in [3, {n - 1}] for {n} observations, got {train_size}")
    perm = seed.child("split").generator().permutation(n)
    return np.sort(perm[:train_size]), np.sort(perm[train_size:])


def evaluate_real(x, y, train_size=300, inits=("sir", "save", "dr"), span=0.75, seed: SeedSpec | None = None,
                  anneal_cfg=None, simplex_cfg=None, restarts: int = 1) -> list[RealResult]:
    """Split, standardize on the training part, estimate directions and
    report test MSE of a local quadratic fit on the projected predictor.

    Both X and Y are standardized with training-set statistics, so the
    MSE is on the standardized response scale.
    """
    seed = seed or SeedSpec(0)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    tr, te = split_indices(x.shape[0], train_size, seed)
    x_tr, x_te = _standardize(x[tr], x[te])
    y_tr, y_te = _standardize(y[tr, None], y[te, None])
    y_tr, y_te = y_tr.ravel(), y_te.ravel()
    d = validate_dataset(x_tr, y_tr)
    smoother = SmootherSpec(span=span)

    def mse_for(direction):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            pred = local_quadratic_predict(x_tr @ direction.coords, y_tr, smoother, x_te @ direction.coords)
        return test_mse(pred, y_te)

    results = []
    for init in inits:
        fit_seed = seed.child("fit", str(init))
        tag, raw = initial_direction(d, init, fit_seed)
        fit = fit_best(d, raw if tag == "user" else init, anneal_cfg, simplex_cfg, fit_seed, restarts=restarts)
        results.append(RealResult(tag, mse_for(raw), mse_for(fit.direction), raw, fit.direction, fit.hellinger))
    return results
