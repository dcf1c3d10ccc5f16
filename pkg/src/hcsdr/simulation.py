"""Monte-Carlo comparison of raw initializers against their Hellinger refinements."""
from __future__ import annotations

import csv
import io
import logging
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import HcsdrError, SeedSpec, UnitDirection, validate_dataset
from .evaluation import subspace_delta
from .initializers import SliceSpec
from .models import ModelSpec, gen_predictors, gen_response
from .optimizer import AnnealConfig, SimplexConfig, fit_direction

log = logging.getLogger(__name__)

SUMMARY_COLUMNS = ("model", "predictors", "eta", "init", "n", "reps", "failures",
                   "mean_raw", "sd_raw", "mean_hc", "sd_hc")
REPLICATION_COLUMNS = ("model", "predictors", "eta", "init", "n", "rep", "delta_raw", "delta_hc",
                       "hellinger", "evaluations", "error")


@dataclass(frozen=True)
class ExperimentGrid:
    models: tuple = ("I", "II", "III")
    inits: tuple = ("sir", "save", "dr")
    sample_sizes: tuple = (100, 200, 400)
    replications: int = 100
    master_seed: int = 0
    predictors: tuple = ("normal",)
    sparse: bool = True
    exp_mean: bool = False
    anneal: AnnealConfig = field(default_factory=AnnealConfig)
    simplex: SimplexConfig = field(default_factory=SimplexConfig)
    n_slices: int | None = None

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        for name in ("models", "inits", "sample_sizes", "predictors"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    def cells(self):
        for model in self.models:
            for kind in self.predictors:
                for n in self.sample_sizes:
                    for init in self.inits:
                        yield model, kind, init, n


@dataclass(frozen=True)
class Replication:
    model: str
    predictors: str
    eta: str
    init: str
    n: int
    rep: int
    delta_raw: float = float("nan")
    delta_hc: float = float("nan")
    hellinger: float = float("nan")
    evaluations: int = 0
    runtime: float = 0.0
    error: str = ""

    @property
    def failed(self) -> bool:
        return bool(self.error)


@dataclass(frozen=True)
class CellSummary:
    model: str
    predictors: str
    eta: str
    init: str
    n: int
    reps: int
    failures: int
    mean_raw: float
    sd_raw: float
    mean_hc: float
    sd_hc: float
    mean_runtime: float


@dataclass
class ExperimentSummary:
    grid: ExperimentGrid
    cells: list
    replications: list

    def cell(self, model, init, n, predictors="normal") -> CellSummary:
        for c in self.cells:
            if (c.model, c.init, c.n, c.predictors) == (str(model).upper(), init, n, predictors):
                return c
        raise KeyError((model, init, n, predictors))


def data_seed(grid: ExperimentGrid, model: str, kind: str, n: int, rep: int) -> SeedSpec:
    # The initializer is deliberately absent: every method column sees the same datasets.
    eta = "sparse" if grid.sparse else "nonsparse"
    return SeedSpec(grid.master_seed, rep, ("data", model, kind, eta, n))


def run_replication(grid: ExperimentGrid, model: str, kind: str, init: str, n: int, rep: int) -> Replication:
    spec = ModelSpec.standard(model, kind, sparse=grid.sparse)
    eta_tag = "sparse" if grid.sparse else "nonsparse"
    seed = data_seed(grid, spec.model, kind, n, rep)
    truth = UnitDirection.from_vector(spec.unit_eta)
    t0 = time.perf_counter()
    try:
        x = gen_predictors(kind, n, seed, exp_mean=grid.exp_mean)
        d = validate_dataset(x, gen_response(x, spec, seed))
        slices = SliceSpec(grid.n_slices) if grid.n_slices else None
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            fit = fit_direction(d, init, grid.anneal, grid.simplex, seed.child("fit", init), slices)
    except (HcsdrError, np.linalg.LinAlgError) as exc:
        log.warning("replication failed: model=%s predictors=%s init=%s n=%d rep=%d seed=%d: %s",
                    spec.model, kind, init, n, rep, grid.master_seed, exc)
        return Replication(spec.model, kind, eta_tag, init, n, rep, runtime=time.perf_counter() - t0,
                           error=f"{type(exc).__name__}: {exc}")
    return Replication(spec.model, kind, eta_tag, init, n, rep,
                       delta_raw=subspace_delta(truth, fit.start),
                       delta_hc=subspace_delta(truth, fit.direction),
                       hellinger=fit.hellinger, evaluations=fit.evaluations,
                       runtime=time.perf_counter() - t0)


def _run_job(args):
    return run_replication(*args)


def _mean_sd(values):
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        return float("nan"), float("nan")
    sd = float(np.std(v, ddof=1)) if v.size > 1 else 0.0
    return float(np.mean(v)), sd


def summarize(grid: ExperimentGrid, reps: list) -> list:
    cells = []
    for model, kind, init, n in grid.cells():
        model = model.upper()
        rows = [r for r in reps if (r.model, r.predictors, r.init, r.n) == (model, kind, init, n)]
        rows.sort(key=lambda r: r.rep)
        ok = [r for r in rows if not r.failed]
        failures = len(rows) - len(ok)
        if failures > 0.05 * len(rows):
            warnings.warn(f"cell {model}/{kind}/{init}/n={n}: {failures} of {len(rows)} replications failed")
        mean_raw, sd_raw = _mean_sd([r.delta_raw for r in ok])
        mean_hc, sd_hc = _mean_sd([r.delta_hc for r in ok])
        cells.append(CellSummary(model, kind, rows[0].eta if rows else "", init, n, len(rows), failures,
                                 mean_raw, sd_raw, mean_hc, sd_hc,
                                 float(np.mean([r.runtime for r in rows])) if rows else float("nan")))
    return cells


def run_experiment(grid: ExperimentGrid, workers: int = 1, progress=None) -> ExperimentSummary:
    """Run every (model, predictors, n, init) cell for ``grid.replications`` replications.

    Results do not depend on ``workers`` or on completion order: each
    replication draws from its own seeded stream and aggregation sorts by
    replication index.
    """
    jobs = [(grid, model, kind, init, n, rep)
            for model, kind, init, n in grid.cells()
            for rep in range(grid.replications)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reps = []
            for r in pool.map(_run_job, jobs, chunksize=max(1, len(jobs) // (8 * workers))):
                reps.append(r)
                if progress:
                    progress(len(reps), len(jobs))
    else:
        reps = []
        for job in jobs:
            reps.append(_run_job(job))
            if progress:
                progress(len(reps), len(jobs))
    return ExperimentSummary(grid, summarize(grid, reps), reps)


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def summary_csv(summary: ExperimentSummary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for c in summary.cells:
        w.writerow([_fmt(getattr(c, k)) for k in SUMMARY_COLUMNS])
    return buf.getvalue()


def replications_csv(summary: ExperimentSummary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPLICATION_COLUMNS)
    for r in sorted(summary.replications, key=lambda r: (r.model, r.predictors, r.init, r.n, r.rep)):
        w.writerow([_fmt(getattr(r, k)) for k in REPLICATION_COLUMNS])
    return buf.getvalue()


def summary_table(summary: ExperimentSummary) -> str:
    """Human-readable table, one row per cell, 4 decimals."""
    lines = [f"{'model':<6}{'X':<10}{'n':>5}  {'init':<6}{'raw':>16}{'HC':>16}  fail"]
    for c in summary.cells:
        lines.append(
            f"{c.model:<6}{c.predictors:<10}{c.n:>5}  {c.init.upper():<6}"
            f"{c.mean_raw:>8.4f} ({c.sd_raw:.4f}){c.mean_hc:>8.4f} ({c.sd_hc:.4f})  {c.failures}"
        )
    return "\n".join(lines)
