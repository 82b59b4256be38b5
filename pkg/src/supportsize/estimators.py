"""Support-size estimators, all pure functions of a fingerprint.

``k`` is the reciprocal of the smallest nonzero probability mass the unknown
distribution may carry (the model parameter), not the true support size; the
two are easy to confuse.  Estimates are reported as reals with a rounded
companion and are never clamped here (clamping is a CLI option).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .chebyshev import g_table
from .errors import DegenerateDegreeError, ParameterError, UndefinedEstimatorError
from .ingest import Fingerprint

# Relative floor for the approximation interval width.  For n >= c1*k*ln(k)
# the rule r = c1*ln(k)/n drops below l = 1/k; the weights have a finite
# limit as r -> l, so the interval is widened to [l, l*(1+eta)] instead of
# failing.  In that regime multiplicities <= L are rare and the correction
# to the plug-in count is negligible, as it should be.
_MIN_WIDTH = 1e-3


@dataclass(frozen=True)
class EstimatorConfig:
    """Degree/interval constants; defaults follow the recommended c0=0.45, c1=0.5."""

    c0: float = 0.45
    c1: float = 0.5
    k: Optional[float] = None
    override_L: Optional[int] = None

    def __post_init__(self):
        if self.c0 <= 0 or self.c1 <= 0:
            raise ParameterError(f"c0 and c1 must be positive, got c0={self.c0}, c1={self.c1}")
        if self.k is not None and self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")


DEFAULT_CONFIG = EstimatorConfig()


@dataclass(frozen=True)
class Estimate:
    value: float
    rounded: int
    estimator_name: str
    params: dict

    @staticmethod
    def of(value: float, name: str, **params) -> "Estimate":
        return Estimate(value=float(value), rounded=round(float(value)),
                        estimator_name=name, params=params)


def degree_params(k: float, n: int, cfg: EstimatorConfig = DEFAULT_CONFIG):
    """Degree and approximation interval: L = floor(c0 ln k), [l, r] = [1/k, c1 ln k / n].

    Logarithms are natural: with c0 = 0.45 this yields L = 4, 6, 9 at
    k = 32000, 1e6, 1e9, which no other base reproduces.
    """
    if k < 2:
        raise ParameterError(f"k must be >= 2, got {k}")
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if cfg.override_L is not None:
        L = cfg.override_L
    else:
        L = math.floor(cfg.c0 * math.log(k))
    if L < 1:
        raise DegenerateDegreeError(
            f"degree rule gives L={L} for k={k} (c0={cfg.c0}); "
            "too few effective moments -- use the plug-in estimator instead"
        )
    l = 1.0 / k
    r = cfg.c1 * math.log(k) / n
    if r <= l * (1.0 + _MIN_WIDTH):
        r = l * (1.0 + _MIN_WIDTH)
    return L, l, r


def _resolve_k(k, cfg):
    if k is None:
        k = cfg.k
    if k is None:
        raise ParameterError("k (reciprocal minimum mass) must be given, via argument or config")
    return float(k)


def chebyshev_estimate(
    fp: Fingerprint, k: Optional[float] = None, cfg: EstimatorConfig = DEFAULT_CONFIG
) -> Estimate:
    """Chebyshev-weighted linear estimator: sum_{j<=L} g[j] h_j + sum_{j>L} h_j.

    The weights are chosen so that, under Poisson sampling, the bias
    contribution of a symbol with mass p is exp(-n p) * P_L(p), and P_L is
    the polynomial deviating least from zero on [l, r] among those pinned to
    -1 at the origin.  Evaluation is O(L^2 + #distinct multiplicities).
    """
    k = _resolve_k(k, cfg)
    if fp.n < 1:
        raise ParameterError("chebyshev estimator needs at least one sample")
    L, l, r = degree_params(k, fp.n, cfg)
    table = g_table(L, l, r, fp.n)
    g = table.g
    value = math.fsum(
        (g[j] if j <= L else 1.0) * c for j, c in fp.items()
    )
    return Estimate.of(value, "chebyshev", n=fp.n, k=k, L=L, l=l, r=r,
                       c0=cfg.c0, c1=cfg.c1)


def plug_in(fp: Fingerprint) -> Estimate:
    """Number of distinct observed symbols."""
    return Estimate.of(float(fp.distinct), "plugin", n=fp.n)


def _coverage(fp: Fingerprint) -> float:
    return 1.0 - fp.get(1) / fp.n


def good_turing(fp: Fingerprint) -> Estimate:
    """Plug-in count divided by the coverage estimate C = 1 - h_1/n (Good 1953)."""
    if fp.n < 1:
        raise ParameterError("Good-Turing estimator needs at least one sample")
    c = _coverage(fp)
    if c <= 0.0:
        raise UndefinedEstimatorError(
            "sample coverage estimate is zero (every symbol seen exactly once); "
            "the Good-Turing estimator is not defined"
        )
    return Estimate.of(fp.distinct / c, "good_turing", n=fp.n, coverage=c)


def chao_lee(fp: Fingerprint, variant: int = 1) -> Estimate:
    """Coverage-adjusted estimators with CV correction (Chao & Lee 1992).

    With C = 1 - h_1/n, D = number of distinct symbols and
    M = sum_j j(j-1) h_j:

        gamma1^2 = max(D*M / (C*n*(n-1)) - 1, 0)
        variant 1:  D/C + n(1-C)/C * gamma1^2
        gamma2^2 = max(gamma1^2 * (1 + (1-C)*M / (C*(n-1))), 0)
        variant 2:  D/C + n(1-C)/C * gamma2^2
    """
    if variant not in (1, 2):
        raise ParameterError(f"variant must be 1 or 2, got {variant}")
    if fp.n < 2:
        raise ParameterError("Chao-Lee estimators need n >= 2")
    c = _coverage(fp)
    if c <= 0.0:
        raise UndefinedEstimatorError(
            "sample coverage estimate is zero; Chao-Lee estimators are not defined"
        )
    n = fp.n
    d = fp.distinct
    m2 = sum(j * (j - 1) * hj for j, hj in fp.items())
    base = d / c
    gamma_sq = max(base * m2 / (n * (n - 1)) - 1.0, 0.0)
    if variant == 2:
        gamma_sq = max(gamma_sq * (1.0 + (1.0 - c) * m2 / (c * (n - 1))), 0.0)
    value = base + n * (1.0 - c) / c * gamma_sq
    return Estimate.of(value, f"chao_lee_{variant}", n=n, coverage=c, cv_sq=gamma_sq)


def efron_thisted(fp: Fingerprint, t: float = 1.0, J: int = 10) -> Estimate:
    """Binomial-smoothed series estimator (Efron & Thisted 1976).

    value = plug_in + sum_{j=1..J} (-1)^(j+1) t^j b_j h_j with
    b_j = P[Binom(J, 1/(t+1)) >= j].
    """
    if fp.n < 1:
        raise ParameterError("Efron-Thisted estimator needs at least one sample")
    if t <= 0:
        raise ParameterError(f"t must be > 0, got {t}")
    if J < 1:
        raise ParameterError(f"J must be a positive integer, got {J}")
    q = 1.0 / (t + 1.0)
    # b_j as upper binomial tails, accumulated from the pmf
    pmf = [math.comb(J, m) * q**m * (1 - q) ** (J - m) for m in range(J + 1)]
    value = float(fp.distinct)
    for j in range(1, J + 1):
        hj = fp.get(j)
        if hj:
            bj = sum(pmf[j:])
            value += (-1.0) ** (j + 1) * t**j * bj * hj
    return Estimate.of(value, "efron_thisted", n=fp.n, t=t, J=J)


def good_toulmin(fp: Fingerprint, t: float = 1.0) -> Estimate:
    """Unsmoothed extrapolation series: plug_in + sum_j (-1)^(j+1) t^j h_j (Good & Toulmin 1956)."""
    if fp.n < 1:
        raise ParameterError("Good-Toulmin estimator needs at least one sample")
    if t <= 0:
        raise ParameterError(f"t must be > 0, got {t}")
    value = float(fp.distinct)
    for j, hj in fp.items():
        value += (-1.0) ** (j + 1) * t**j * hj
    return Estimate.of(value, "good_toulmin", n=fp.n, t=t)
