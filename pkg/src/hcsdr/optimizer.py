"""Maximize the empirical Hellinger correlation over the unit sphere.

The search runs in unconstrained angle space (p - 1 variables): simulated
annealing from an initial direction, then a downhill simplex started at
the best annealing point.  Both stages minimize the raw nearest-neighbour
affinity estimate, which is equivalent to maximizing the Hellinger
correlation wherever the latter is not clamped at zero, and still ranks
candidates where it is.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .copula import _b_raw_from_ranks, clamp_b, h_map, midranks
from .core import Dataset, FitResult, SeedSpec, ShapeMismatch, SphereAngles, UnitDirection
from .initializers import SliceSpec, inverse_regression_direction, random_direction
from .sphere import angles_to_array, from_angles, to_angles

SCHEDULES = ("logarithmic", "exponential", "linear")


@dataclass(frozen=True)
class AnnealConfig:
    """Annealing budget and schedule.

    ``initial_temp`` is on the scale of the affinity estimate (values near
    1, differences of a few hundredths between candidate directions).
    Proposals are Gaussian in every angle with standard deviation
    ``step_scale * T_k / T_0``, so steps shrink with the temperature.
    """

    iterations: int = 2000
    initial_temp: float = 0.1
    temp_schedule: str = "logarithmic"
    step_scale: float = 1.0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if not self.initial_temp > 0:
            raise ValueError("initial_temp must be positive")
        if self.temp_schedule not in SCHEDULES:
            raise ValueError(f"temp_schedule must be one of {SCHEDULES}")
        if not self.step_scale > 0:
            raise ValueError("step_scale must be positive")

    def temperature(self, k: int) -> float:
        t0 = self.initial_temp
        if self.temp_schedule == "logarithmic":
            return t0 / math.log(k + math.e)
        if self.temp_schedule == "exponential":
            return t0 * 0.99**k
        return t0 * max(1.0 - k / self.iterations, 1e-3)


@dataclass(frozen=True)
class SimplexConfig:
    max_iterations: int = 2000
    init_step: float = 0.1
    reflect: float = 1.0
    expand: float = 2.0
    contract: float = 0.5
    shrink: float = 0.5
    tol_f: float = 1e-8
    tol_x: float = 1e-8

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"{f.name} must be positive")
        if not self.expand > 1.0 > self.contract:
            raise ValueError("need expand > 1 > contract")
        if not self.shrink < 1.0:
            raise ValueError("shrink must be < 1")


class Objective:
    """Memoized Hellinger objective for one dataset.

    Angle vectors are quantized to ``quantum`` radians for the cache key;
    a cache hit returns the stored value unchanged.  ``evaluations`` counts
    actual (non-cached) estimator runs, each O(n^2 p) in the worst case.
    """

    def __init__(self, d: Dataset, quantum: float = 1e-9):
        self.x = np.ascontiguousarray(d.x)
        self.y_ranks = midranks(np.ascontiguousarray(d.y))
        self.quantum = quantum
        self.evaluations = 0
        self._cache: dict[bytes, float] = {}

    def affinity(self, phi) -> float:
        """Unclamped affinity estimate at the direction given by ``phi``."""
        phi = np.asarray(phi, dtype=np.float64)
        key = np.round(phi / self.quantum).astype(np.int64).tobytes()
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        z = self.x @ angles_to_array(phi)
        b = float(_b_raw_from_ranks(midranks(z), self.y_ranks))
        self._cache[key] = b
        self.evaluations += 1
        return b

    def hellinger(self, phi) -> float:
        return h_map(clamp_b(self.affinity(phi)))

    __call__ = hellinger


def objective(d: Dataset, phi: SphereAngles) -> float:
    """Empirical Hellinger correlation between ``X @ alpha(phi)`` and ``Y``."""
    return Objective(d).hellinger(phi.phi)


def _anneal(obj: Objective, phi0, cfg: AnnealConfig, rng: np.random.Generator):
    current = np.array(phi0, dtype=np.float64)
    f_cur = obj.affinity(current)
    best, f_best = current.copy(), f_cur
    t0 = cfg.initial_temp
    for k in range(cfg.iterations):
        temp = cfg.temperature(k)
        proposal = current + rng.normal(0.0, cfg.step_scale * temp / t0, size=current.size)
        f_new = obj.affinity(proposal)
        delta = f_new - f_cur
        if delta <= 0.0 or rng.random() < math.exp(-delta / temp):
            current, f_cur = proposal, f_new
            if f_cur < f_best:
                best, f_best = current.copy(), f_cur
    return best, f_best


def anneal(d: Dataset, start: UnitDirection, cfg: AnnealConfig, seed: SeedSpec,
           obj: Objective | None = None) -> tuple[SphereAngles, float]:
    """Simulated annealing with Gaussian angle proposals and Metropolis acceptance.

    Returns the best point visited (the start included) and its Hellinger
    correlation, so the result is never worse than the start.
    """
    obj = obj or Objective(d)
    best, f_best = _anneal(obj, to_angles(start).phi, cfg, seed.child("anneal").generator())
    return SphereAngles(best), h_map(clamp_b(f_best))


def minimize_simplex(f, x0, cfg: SimplexConfig):
    """Nelder-Mead minimization of ``f`` from ``x0``.

    Returns ``(x_best, f_best, iterations, best_trace)`` where
    ``best_trace[i]`` is the best vertex value after iteration i.
    Terminates when both the spread of vertex values is within ``tol_f``
    and every vertex is within ``tol_x`` (max-norm) of the best one.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    m = x0.size
    verts = np.tile(x0, (m + 1, 1))
    verts[1:] += cfg.init_step * np.eye(m)
    vals = np.array([f(v) for v in verts])
    trace = []
    it = 0
    while it < cfg.max_iterations:
        order = np.argsort(vals, kind="stable")
        verts, vals = verts[order], vals[order]
        if vals[-1] - vals[0] <= cfg.tol_f and np.max(np.abs(verts[1:] - verts[0])) <= cfg.tol_x:
            break
        it += 1
        centroid = verts[:-1].mean(axis=0)
        worst = verts[-1]
        xr = centroid + cfg.reflect * (centroid - worst)
        fr = f(xr)
        if fr < vals[0]:
            xe = centroid + cfg.expand * (xr - centroid)
            fe = f(xe)
            if fe < fr:
                verts[-1], vals[-1] = xe, fe
            else:
                verts[-1], vals[-1] = xr, fr
        elif fr < vals[-2]:
            verts[-1], vals[-1] = xr, fr
        else:
            if fr < vals[-1]:
                xc = centroid + cfg.contract * (xr - centroid)
                fc = f(xc)
                accept = fc <= fr
            else:
                xc = centroid + cfg.contract * (worst - centroid)
                fc = f(xc)
                accept = fc < vals[-1]
            if accept:
                verts[-1], vals[-1] = xc, fc
            else:
                verts[1:] = verts[0] + cfg.shrink * (verts[1:] - verts[0])
                vals[1:] = [f(v) for v in verts[1:]]
        trace.append(float(vals.min()))
    i = int(np.argmin(vals))
    return verts[i].copy(), float(vals[i]), it, trace


def nelder_mead(d: Dataset, start: SphereAngles, cfg: SimplexConfig,
                obj: Objective | None = None) -> tuple[SphereAngles, float]:
    """Downhill simplex in angle space seeded at ``start``; returns (angles, Hellinger)."""
    obj = obj or Objective(d)
    x, fx, _, _ = minimize_simplex(obj.affinity, start.phi, cfg)
    return SphereAngles(x), h_map(clamp_b(fx))


def initial_direction(d: Dataset, init, seed: SeedSpec, slices: SliceSpec | None = None) -> tuple[str, UnitDirection]:
    """Resolve an initializer tag ("sir", "save", "dr", "random") or an explicit direction."""
    if isinstance(init, UnitDirection):
        if init.p != d.p:
            raise ShapeMismatch(f"start direction has {init.p} coordinates, data has {d.p} predictors")
        return "user", init
    tag = str(init).lower()
    if tag == "random":
        return tag, random_direction(d.p, seed.child("init"))
    return tag, inverse_regression_direction(d, tag, slices)


def fit_direction(d: Dataset, init="sir", anneal_cfg: AnnealConfig | None = None,
                  simplex_cfg: SimplexConfig | None = None, seed: SeedSpec | None = None,
                  slices: SliceSpec | None = None) -> FitResult:
    """Initializer, annealing, then downhill simplex.

    ``FitResult.hellinger`` is the objective at the final angles; the
    returned direction is sign-canonicalized (first nonzero coordinate
    positive), which leaves the spanned line unchanged.
    """
    anneal_cfg = anneal_cfg or AnnealConfig()
    simplex_cfg = simplex_cfg or SimplexConfig()
    seed = seed or SeedSpec(0)
    tag, start = initial_direction(d, init, seed, slices)
    obj = Objective(d)
    phi0 = to_angles(start).phi
    f0 = obj.affinity(phi0)
    phi1, f1 = _anneal(obj, phi0, anneal_cfg, seed.child("anneal").generator())
    phi2, f2, _, _ = minimize_simplex(obj.affinity, phi1, simplex_cfg)
    b = clamp_b(f2)
    trace = (
        ("start", h_map(clamp_b(f0))),
        ("anneal", h_map(clamp_b(f1))),
        ("simplex", h_map(b)),
    )
    direction = from_angles(SphereAngles(phi2)).canonical_sign()
    return FitResult(direction, h_map(b), b, tag, obj.evaluations, trace, start, f2)


def fit_best(d: Dataset, init="sir", anneal_cfg=None, simplex_cfg=None, seed: SeedSpec | None = None,
             slices=None, restarts: int = 1) -> FitResult:
    """Run ``restarts`` independently seeded pipelines and keep the highest objective."""
    seed = seed or SeedSpec(0)
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    if restarts == 1:
        return fit_direction(d, init, anneal_cfg, simplex_cfg, seed, slices)
    results = [fit_direction(d, init, anneal_cfg, simplex_cfg, seed.child("restart", r), slices)
               for r in range(restarts)]
    best = min(results, key=lambda r: r.bhattacharyya_raw)
    return replace(best, evaluations=sum(r.evaluations for r in results))
