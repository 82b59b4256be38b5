"""Simulation sweeps and sample-complexity probes with reproducible seeding.

Per-trial generators are derived as ``SeedSequence([master_seed, *path])`` so
any cell of a sweep can be recomputed independently and whole runs are
bit-reproducible.  Within a trial the same sample is shared by every
estimator, matching how the estimators are compared in practice.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, asdict
from typing import Optional

import numpy as np

from .errors import ParameterError, UndefinedEstimatorError
from .estimators import (
    EstimatorConfig,
    DEFAULT_CONFIG,
    chao_lee,
    chebyshev_estimate,
    efron_thisted,
    good_toulmin,
    good_turing,
    plug_in,
)
from .synth import DiscreteDistribution, effective_k, sample_fingerprint

# estimator registry: CLI/sweep token -> callable(fp, k, cfg) -> value
ESTIMATORS = {
    "wy": lambda fp, k, cfg: chebyshev_estimate(fp, k, cfg).value,
    "plugin": lambda fp, k, cfg: plug_in(fp).value,
    "gt": lambda fp, k, cfg: good_turing(fp).value,
    "cl1": lambda fp, k, cfg: chao_lee(fp, 1).value,
    "cl2": lambda fp, k, cfg: chao_lee(fp, 2).value,
    "et": lambda fp, k, cfg: efron_thisted(fp).value,
    "gtoulmin": lambda fp, k, cfg: good_toulmin(fp).value,
}

CSV_COLUMNS = ["estimator", "n", "mean_estimate", "rmse", "std_dev", "trials", "undefined_count"]


@dataclass(frozen=True)
class SweepSpec:
    family: DiscreteDistribution
    n_grid: list
    trials: int = 50
    estimators: tuple = ("wy", "plugin", "gt")
    seed: int = 0
    sampling: str = "iid"

    def __post_init__(self):
        if not self.n_grid:
            raise ParameterError("n_grid must be nonempty")
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ParameterError(f"n_grid must be strictly increasing, got {self.n_grid}")
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}")
        if self.sampling not in ("iid", "poissonized"):
            raise ParameterError(f"sampling must be iid or poissonized, got {self.sampling!r}")
        unknown = [e for e in self.estimators if e not in ESTIMATORS]
        if unknown:
            raise ParameterError(f"unknown estimators {unknown}; choose from {sorted(ESTIMATORS)}")


@dataclass(frozen=True)
class SweepRow:
    estimator: str
    n: int
    mean_estimate: Optional[float]
    rmse: Optional[float]
    std_dev: Optional[float]
    trials: int
    undefined_count: int


def trial_rng(master_seed: int, *path: int) -> np.random.Generator:
    """PCG64 generator for one trial, derived as SeedSequence([master_seed, *path])."""
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), *map(int, path)]))


def run_sweep(spec: SweepSpec, cfg: EstimatorConfig = DEFAULT_CONFIG) -> list[SweepRow]:
    """Mean/RMSE/stddev of each estimator at each n, against the true support size.

    Undefined-estimator trials (for example Good-Turing when no symbol
    repeats) are counted and excluded from the moments; they never abort the
    sweep.  Deterministic for a fixed master seed.
    """
    k = effective_k(spec.family)
    s_true = spec.family.support_size
    values: dict[str, dict[int, list[float]]] = {e: {} for e in spec.estimators}
    undefined: dict[str, dict[int, int]] = {e: {} for e in spec.estimators}
    for ni, n in enumerate(spec.n_grid):
        for est in spec.estimators:
            values[est][n] = []
            undefined[est][n] = 0
        for t in range(spec.trials):
            rng = trial_rng(spec.seed, ni, t)
            fp = sample_fingerprint(spec.family, n, rng, spec.sampling)
            for est in spec.estimators:
                try:
                    if fp.n == 0 and est != "plugin":
                        raise UndefinedEstimatorError("empty sample")
                    values[est][n].append(ESTIMATORS[est](fp, k, cfg))
                except UndefinedEstimatorError:
                    undefined[est][n] += 1
    rows = []
    for est in spec.estimators:
        for n in spec.n_grid:
            vals = np.array(values[est][n])
            bad = undefined[est][n]
            if vals.size == 0:
                rows.append(SweepRow(est, n, None, None, None, spec.trials, bad))
                continue
            rows.append(
                SweepRow(
                    estimator=est,
                    n=n,
                    mean_estimate=float(vals.mean()),
                    rmse=float(np.sqrt(np.mean((vals - s_true) ** 2))),
                    std_dev=float(vals.std(ddof=1)) if vals.size > 1 else 0.0,
                    trials=spec.trials,
                    undefined_count=bad,
                )
            )
    return rows


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    spread = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(center - spread, 0.0), min(center + spread, 1.0)


@dataclass(frozen=True)
class ProbeResult:
    estimator: str
    epsilon: float
    delta: float
    k: float
    n_star: Optional[int]
    failure_freq: Optional[float]
    wilson_low: Optional[float]
    wilson_high: Optional[float]
    trials: int
    ceiling: int
    ceiling_reached: bool
    evaluations: list = field(default_factory=list)


def probe_sample_complexity(
    family: DiscreteDistribution,
    estimator: str,
    epsilon: float,
    delta: float = 0.1,
    trials: int = 50,
    seed: int = 0,
    ceiling: Optional[int] = None,
    cfg: EstimatorConfig = DEFAULT_CONFIG,
    sampling: str = "iid",
) -> ProbeResult:
    """Smallest n at which the empirical failure frequency P[|S_hat - S| >= eps*k] drops to delta.

    Doubles n out of a failing region, then bisects; because the empirical
    curve is only stochastically monotone, the boundary point is re-verified
    with 4x trials and the search resumes upward if the verification fails.
    An estimator that is undefined on a trial counts as a failure.  epsilon
    >= 1/2 returns 0 (support sizes never exceed k, so the trivial estimate
    k/2 always lands within k/2).
    """
    if estimator not in ESTIMATORS:
        raise ParameterError(f"unknown estimator {estimator!r}")
    k = effective_k(family)
    if epsilon >= 0.5:
        return ProbeResult(estimator, epsilon, delta, k, 0, None, None, None,
                           trials, 0, False, [])
    if epsilon < 1.0 / k:
        raise ParameterError(f"epsilon must be >= 1/k = {1.0 / k:.3g}, got {epsilon}")
    if ceiling is None:
        ceiling = int(10 * k * math.log(k))
    s_true = family.support_size
    tol = epsilon * k
    fn = ESTIMATORS[estimator]
    evaluations: list[tuple[int, float]] = []

    def failure_freq(n: int, reps: int, salt: int) -> float:
        failures = 0
        for t in range(reps):
            rng = trial_rng(seed, salt, n, t)
            fp = sample_fingerprint(family, n, rng, sampling)
            try:
                if fp.n == 0:
                    raise UndefinedEstimatorError("empty sample")
                val = fn(fp, k, cfg)
            except UndefinedEstimatorError:
                failures += 1
                continue
            if abs(val - s_true) >= tol:
                failures += 1
        freq = failures / reps
        evaluations.append((n, freq))
        return freq

    def search_up(first_n: int, lo_init: int):
        n = max(first_n, 1)
        lo = lo_init  # highest n known (or assumed) to fail
        while n <= ceiling:
            if failure_freq(n, trials, 0) <= delta:
                return lo, n
            lo = n
            n *= 2
        return lo, None

    lo, hi = search_up(1, 0)
    for _ in range(6):  # verification rounds through the noisy boundary zone
        if hi is None:
            return ProbeResult(estimator, epsilon, delta, k, None, None, None, None,
                               trials, ceiling, True, evaluations)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if failure_freq(mid, trials, 0) <= delta:
                hi = mid
            else:
                lo = mid
        freq4 = failure_freq(hi, 4 * trials, 1)
        if freq4 <= delta:
            wl, wh = wilson_interval(round(freq4 * 4 * trials), 4 * trials)
            return ProbeResult(estimator, epsilon, delta, k, hi, freq4, wl, wh,
                               trials, ceiling, False, evaluations)
        # boundary point failed the stronger test: hop 5% forward and rescan
        lo, hi = search_up(hi + max(1, hi // 20), hi)
    return ProbeResult(estimator, epsilon, delta, k, None, None, None, None,
                       trials, ceiling, True, evaluations)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)  # full round-trip precision
    return str(value)


def emit_csv(rows: list[SweepRow], path) -> None:
    """Write sweep rows with the fixed column order of CSV_COLUMNS."""
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            d = asdict(row)
            writer.writerow([_cell(d[col]) for col in CSV_COLUMNS])


def parse_csv_rows(path) -> list[SweepRow]:
    """Inverse of emit_csv."""
    out = []
    with open(path, "r", encoding="ascii", newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            out.append(
                SweepRow(
                    estimator=rec["estimator"],
                    n=int(rec["n"]),
                    mean_estimate=float(rec["mean_estimate"]) if rec["mean_estimate"] else None,
                    rmse=float(rec["rmse"]) if rec["rmse"] else None,
                    std_dev=float(rec["std_dev"]) if rec["std_dev"] else None,
                    trials=int(rec["trials"]),
                    undefined_count=int(rec["undefined_count"]),
                )
            )
    return out


def emit_json(records: list, path) -> None:
    """One JSON record per line; dataclasses are converted to dicts."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for rec in records:
            if hasattr(rec, "__dataclass_fields__"):
                rec = asdict(rec)
            fh.write(json.dumps(rec) + "\n")
