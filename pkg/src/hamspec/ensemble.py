"""Seeded Monte-Carlo runs over the random linear and random general code models."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import codes, conjecture_lab
from .errors import ParameterError
from .rate_bounds import entropy_inverse

LINEAR_RATIO_CONST = 2.0
GENERAL_RATIO_CONST = 4.0
DISTANCE_WINDOW = 0.1


def window(d: int, eps: float = DISTANCE_WINDOW) -> list[int]:
    """Integer distances i with d <= i <= (1 + eps) d."""
    return list(range(d, math.floor((1 + eps) * d + 1e-12) + 1))


@dataclass
class TrialResult:
    seed: int
    size: int
    d: int | None
    ratio: float | None
    extra: dict = field(default_factory=dict)


def _linear_trial(n, k, seed, eps):
    c = codes.sample_random_linear(n, k, seed)
    if len(c) < 2:
        return TrialResult(seed, len(c), None, None)
    d = c.min_distance
    best = None
    for i in window(d, eps):
        a = codes.weight_slice(c, i)
        if a.size == 0:
            continue
        r = conjecture_lab.slice_norm_ratio(conjecture_lab.SliceFunction(n, a)).ratio
        best = r if best is None else max(best, r)
    return TrialResult(seed, len(c), d, best, {"dimension": c.dimension})


def _general_trial(params, seed, eps):
    c = codes.sample_random_general(params, seed)
    extra = {"survivor_fraction": len(c) / params.N}
    if len(c) < 2:
        return TrialResult(seed, len(c), None, None, extra)
    d = c.min_distance
    best = None
    for i in window(d, eps):
        g = conjecture_lab.DistanceGraph(c, i)
        m = conjecture_lab.distance_graph_moments(g)
        if m.ratio is not None:
            best = m.ratio if best is None else max(best, m.ratio)
    g0 = conjecture_lab.DistanceGraph(c, params.d_0)
    deg = g0.degrees.astype(np.float64)
    extra["max_common"] = g0.max_common
    extra["degree_moment_ratio"] = float(np.mean(deg**2) / np.mean(deg) ** 2) if deg.sum() else None
    return TrialResult(seed, len(c), d, best, extra)


@dataclass
class EnsembleSummary:
    model: str
    n: int
    R: float
    trials: int
    seed: int
    constant: float
    ratios: list
    results: list
    params: dict

    @property
    def valid(self) -> list:
        return [r for r in self.ratios if r is not None]

    @property
    def max_ratio(self) -> float | None:
        return max(self.valid) if self.valid else None

    @property
    def pass_fraction(self) -> float:
        v = self.valid
        return sum(r <= self.constant for r in v) / len(v) if v else 0.0

    def to_dict(self) -> dict:
        v = self.valid
        out = {
            "model": self.model,
            "n": self.n,
            "R": self.R,
            "trials": self.trials,
            "seed": self.seed,
            "params": self.params,
            "constant": self.constant,
            "trials_with_ratio": len(v),
            "ratio_max": self.max_ratio,
            "ratio_mean": float(np.mean(v)) if v else None,
            "ratio_pass_fraction": self.pass_fraction,
        }
        ds = [r.d for r in self.results if r.d is not None]
        if self.model == "linear":
            delta_gv = entropy_inverse(1 - self.R)
            out["min_distance_mean"] = float(np.mean(ds)) if ds else None
            out["gv_distance"] = delta_gv * self.n
            out["fraction_distance_near_gv"] = float(np.mean([abs(d / self.n - delta_gv) <= 0.15 for d in ds])) if ds else 0.0
        else:
            tau, d0, theta = self.params["tau"], self.params["d_0"], self.params["theta"]
            surv = [r.extra["survivor_fraction"] for r in self.results]
            out["survivor_fraction_mean"] = float(np.mean(surv))
            out["fraction_survivors_ok"] = float(np.mean([s >= 1 - 5 * tau for s in surv]))
            out["fraction_min_distance_d0"] = float(np.mean([d == d0 for d in ds])) if ds else 0.0
            mc = [r.extra["max_common"] for r in self.results if "max_common" in r.extra]
            out["max_common_neighbors"] = int(max(mc)) if mc else None
            dm = [r.extra["degree_moment_ratio"] for r in self.results if r.extra.get("degree_moment_ratio") is not None]
            out["degree_moment_ratio_max"] = float(max(dm)) if dm else None
            out["fraction_degree_moment_ok"] = float(np.mean([x <= 10 / theta for x in dm])) if dm else 0.0
        return out


def run_ensemble(
    model: str,
    n: int,
    R: float,
    trials: int,
    seed: int = 0,
    tau: float = 0.05,
    eps: float = DISTANCE_WINDOW,
    threads: int | None = None,
    constant: float | None = None,
) -> EnsembleSummary:
    """Per-trial max norm ratio over distances in [d, (1 + eps) d]; trial t uses seed ^ t."""
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    seeds = [codes.trial_seed(seed, t) for t in range(trials)]
    if model == "linear":
        k = math.floor(R * n + 1e-9)
        if not 1 <= k <= min(n, 24):
            raise ParameterError(f"dimension floor(R n) = {k} outside [1, min(n, 24)]")
        job = lambda s: _linear_trial(n, k, s, eps)  # noqa: E731
        params = {"k": k}
        const = LINEAR_RATIO_CONST if constant is None else constant
    elif model == "general":
        p = codes.model_params(n, R, tau)
        job = lambda s: _general_trial(p, s, eps)  # noqa: E731
        params = {"N": p.N, "tau": tau, "d_0": p.d_0, "theta": p.theta}
        const = GENERAL_RATIO_CONST if constant is None else constant
    else:
        raise ParameterError(f"unknown model {model!r}; use 'linear' or 'general'")
    with ThreadPoolExecutor(max_workers=threads or None) as pool:
        results = list(pool.map(job, seeds))
    return EnsembleSummary(model, n, R, trials, seed, const, [r.ratio for r in results], results, params)


def growth_flag(maxima: list[float], rel: float = 0.05) -> bool:
    """True when the per-n maxima increase strictly and by more than ``rel`` overall."""
    if len(maxima) < 2:
        return False
    increasing = all(b > a for a, b in zip(maxima, maxima[1:]))
    return increasing and maxima[-1] > (1 + rel) * maxima[0]
