"""Numerical laboratory for the minimax lower-bound machinery.

Pieces: best uniform polynomial approximation of 1/x (Remez exchange and the
Timan closed form), the discretized moment-matching linear program whose value
witnesses the duality with best approximation, construction of moment-matched
prior pairs supported on the equioscillation extrema, exact and bounded total
variation between the induced Poisson mixtures, a numeric certificate for the
sample-complexity lower bound, and the exponentially weighted Chebyshev
maximization used in the bias analysis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial import chebyshev as _cheb
from scipy.optimize import linprog
from scipy.stats import poisson

from .errors import ParameterError, PrecisionError, SolverError

_TAIL_CERT = 1e-12  # certified Poisson tail mass for exact TV truncation


@dataclass(frozen=True, eq=False)
class ApproxResult:
    """Best uniform approximation of 1/x on [a, b] by a polynomial of the given degree."""

    degree: int
    a: float
    b: float
    coeffs: np.ndarray          # monomial coefficients, ascending
    error: float
    extrema: np.ndarray         # degree+2 equioscillation abscissae, ascending
    _series: object = field(repr=False, default=None)

    def poly(self, x):
        return self._series(x)

    def residual(self, x):
        return 1.0 / np.asarray(x, dtype=float) - self._series(x)


def closed_form_error(L: int, a: float, b: float) -> float:
    """E_{L-1}(1/x, [a, b]): best degree-(L-1) approximation error in closed form.

    Equals half of ((1+s)^2/a) * ((1-s)/(1+s))^L with s = sqrt(a/b); the
    classical formula for the interval [1+nu, lambda], reparameterized by the
    endpoints (it is scale-covariant, so any 1 <= a < b is valid).
    """
    if not (1.0 <= a < b):
        raise ParameterError(f"need 1 <= a < b, got a={a}, b={b}")
    if L < 1:
        raise ParameterError(f"need L >= 1, got {L}")
    s = math.sqrt(a / b)
    return (1.0 + s) ** 2 / (2.0 * a) * ((1.0 - s) / (1.0 + s)) ** L


def best_inv_approx(
    degree: int, a: float, b: float, tol: float = 1e-13, max_iter: int = 60
) -> ApproxResult:
    """Remez exchange for 1/x on [a, b].

    1/x is smooth and strictly convex on [a, b] with a >= 1, so the residual
    of the optimum equioscillates at exactly degree+2 points including both
    endpoints and the standard multi-point exchange converges quadratically.
    The polynomial is carried in the Chebyshev basis of the interval for
    conditioning and converted to monomial coefficients only for output.
    """
    if not (1.0 <= a < b):
        raise ParameterError(f"need 1 <= a < b, got a={a}, b={b}")
    if degree < 0:
        raise ParameterError(f"degree must be >= 0, got {degree}")
    m = degree + 2
    mid, half = (a + b) / 2.0, (b - a) / 2.0
    t = -np.cos(np.pi * np.arange(m) / (m - 1))  # reference, ascending in [-1, 1]
    signs = (-1.0) ** np.arange(m)
    grid = np.linspace(-1.0, 1.0, 8192)
    xg = mid + half * grid
    last_profile = None
    best_gap = math.inf
    stalled = 0
    for _ in range(max_iter):
        x = mid + half * t
        system = np.hstack([_cheb.chebvander(t, degree), signs[:, None]])
        try:
            sol = np.linalg.solve(system, 1.0 / x)
        except np.linalg.LinAlgError as exc:
            raise SolverError(f"singular Remez system on [{a}, {b}], degree {degree}") from exc
        coef, level = sol[:-1], sol[-1]
        series = _cheb.Chebyshev(coef, domain=[a, b])
        resid = 1.0 / xg - series(xg)
        last_profile = resid
        cand = _alternating_extrema(resid, m)
        t_new = _refine_extrema(grid, cand, resid, series, mid, half)
        x_new = mid + half * t_new
        dev = np.abs(1.0 / x_new - series(x_new))
        t = t_new
        # residual evaluation carries ~eps/a of absolute noise, so narrow
        # intervals (tiny errors) stall there instead of reaching tol; a
        # stalled gap well below the deviation scale is converged in doubles
        gap = dev.max() - abs(level)
        if gap <= tol * dev.max() or (stalled >= 3 and gap <= 1e-6 * dev.max()):
            extrema = mid + half * t
            mono = series.convert(kind=np.polynomial.Polynomial)
            return ApproxResult(
                degree=degree, a=a, b=b,
                coeffs=np.asarray(mono.coef, dtype=float),
                error=float(abs(level)),
                extrema=extrema,
                _series=series,
            )
        if gap >= 0.5 * best_gap:
            stalled += 1
        else:
            stalled = 0
        best_gap = min(best_gap, gap)
    raise SolverError(
        f"Remez did not converge in {max_iter} iterations on [{a}, {b}], degree {degree}; "
        f"last residual range [{last_profile.min():.3e}, {last_profile.max():.3e}]"
    )


def _alternating_extrema(resid: np.ndarray, m: int) -> list[int]:
    """One grid index of max |residual| per sign run; keep the best m consecutive runs."""
    sign = np.sign(resid)
    runs = []
    start = 0
    for i in range(1, len(resid) + 1):
        if i == len(resid) or sign[i] != sign[start]:
            seg = np.arange(start, i)
            runs.append(int(seg[np.argmax(np.abs(resid[seg]))]))
            start = i
    if len(runs) < m:
        raise SolverError(f"residual alternates on only {len(runs)} runs, need {m}")
    if len(runs) > m:
        best = None
        for s0 in range(len(runs) - m + 1):
            window = runs[s0 : s0 + m]
            low = min(abs(resid[i]) for i in window)
            if best is None or low > best[0]:
                best = (low, window)
        runs = best[1]
    return runs


def _refine_extrema(grid, cand, resid, series, mid, half) -> np.ndarray:
    """Ternary search for each |residual| extremum inside its grid bracket."""
    out = np.empty(len(cand))
    for ii, ci in enumerate(cand):
        lo = grid[max(ci - 1, 0)]
        hi = grid[min(ci + 1, len(grid) - 1)]
        s = 1.0 if resid[ci] >= 0 else -1.0
        for _ in range(70):
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            r1 = s * (1.0 / (mid + half * m1) - series(mid + half * m1))
            r2 = s * (1.0 / (mid + half * m2) - series(mid + half * m2))
            if r1 < r2:
                lo = m1
            else:
                hi = m2
        out[ii] = 0.5 * (lo + hi)
    return out


def primal_value(L: int, a: float, b: float, grid_size: int) -> float:
    """Discretized moment-matching LP: sup E[1/X] - E[1/X'] with L matched moments.

    Two probability vectors live on a shared grid of [a, b]; their first L
    moments must agree.  As the grid refines the optimum converges to twice
    the best degree-L approximation error of 1/x on [a, b] (the duality this
    module exists to witness).  Moment constraints are expressed in the
    Chebyshev basis of the interval so the LP stays well conditioned.
    """
    if not (1.0 <= a < b):
        raise ParameterError(f"need 1 <= a < b, got a={a}, b={b}")
    if L < 0:
        raise ParameterError(f"need L >= 0, got {L}")
    if grid_size < L + 2:
        raise ParameterError(f"grid_size must be >= L+2 = {L + 2}, got {grid_size}")
    xs = np.linspace(a, b, grid_size)
    t = (2.0 * xs - a - b) / (b - a)
    basis = _cheb.chebvander(t, max(L, 0))
    rows = [
        np.concatenate([np.ones(grid_size), np.zeros(grid_size)]),
        np.concatenate([np.zeros(grid_size), np.ones(grid_size)]),
    ]
    for j in range(1, L + 1):
        rows.append(np.concatenate([basis[:, j], -basis[:, j]]))
    a_eq = np.vstack(rows)
    b_eq = np.zeros(len(rows))
    b_eq[0] = b_eq[1] = 1.0
    cost = np.concatenate([-1.0 / xs, 1.0 / xs])
    res = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status != 0:
        raise SolverError(f"moment-matching LP failed (status {res.status}): {res.message}")
    return float(-res.fun)


@dataclass(frozen=True, eq=False)
class PriorPair:
    """Two distributions on {0} U [1+nu, lam] with unit mean and L matched moments.

    ``gap`` is P[U'=0] - P[U=0], the separation the pair buys; the zero atom
    weights record numerically which prior carries the larger mass at zero
    (it is the second one, atoms_v/weights_v).
    """

    atoms_u: np.ndarray
    weights_u: np.ndarray
    atoms_v: np.ndarray
    weights_v: np.ndarray
    L: int
    nu: float
    lam: float
    gap: float

    def moment(self, which: str, j: int) -> float:
        atoms = self.atoms_u if which == "u" else self.atoms_v
        weights = self.weights_u if which == "u" else self.weights_v
        return float(np.dot(weights, atoms**j))

    def validate(self, tol_weights=1e-10, tol_mean=1e-8, tol_moment=1e-8):
        for atoms, weights in ((self.atoms_u, self.weights_u), (self.atoms_v, self.weights_v)):
            if np.any(weights < -tol_weights):
                raise SolverError("negative prior weight")
            if abs(weights.sum() - 1.0) > tol_weights:
                raise SolverError("prior weights do not sum to 1")
            nonzero = atoms[atoms > 0]
            if nonzero.size and (nonzero.min() < (1 + self.nu) * (1 - 1e-9) or
                                 nonzero.max() > self.lam * (1 + 1e-9)):
                raise SolverError("prior atom outside [1+nu, lam]")
        for which in ("u", "v"):
            if abs(self.moment(which, 1) - 1.0) > tol_mean:
                raise SolverError("prior mean is not 1")
        for j in range(1, self.L + 1):
            if abs(self.moment("u", j) - self.moment("v", j)) > tol_moment * self.lam**j:
                raise SolverError(f"moment {j} mismatch beyond tolerance")
        return True


def construct_prior_pair(L: int, nu: float, lam: float) -> PriorPair:
    """Moment-matched pair from the equioscillation extrema of the 1/x approximation.

    The signed measure supported on the L+1 extrema of the best degree-(L-1)
    approximation that annihilates all polynomials of degree <= L-1 is unique
    up to scale: its weights are the divided-difference coefficients
    1/prod(x_i - x_j).  Splitting it into positive and negative parts (which
    land on the positive- and negative-residual extrema respectively) and
    normalizing each to unit mass gives X, X'; mapping mass w at x to mass
    w/x at x plus a remainder at zero turns them into the unit-mean pair
    U, U' whose gap P[U'=0] - P[U=0] equals twice the approximation error.
    """
    if nu < 0:
        raise ParameterError(f"nu must be >= 0, got {nu}")
    if lam <= 1 + nu:
        raise ParameterError(f"need lam > 1 + nu, got lam={lam}, nu={nu}")
    if L < 1:
        raise ParameterError(f"need L >= 1, got {L}")
    a, b = 1.0 + nu, lam
    approx = best_inv_approx(L - 1, a, b)
    x = np.sort(approx.extrema)
    spacing = np.diff(x).min() if x.size > 1 else 1.0
    if spacing <= 1e-12 * (b - a):
        raise SolverError(
            f"equioscillation extrema nearly coincide (min spacing {spacing:.3e}); "
            "the moment system is singular"
        )
    c = np.array([1.0 / np.prod(x[i] - np.delete(x, i)) for i in range(x.size)])
    if float(np.sum(c / x)) < 0.0:
        c = -c
    pos, neg = c > 0, c < 0
    w_x = c[pos] / c[pos].sum()
    w_xp = c[neg] / c[neg].sum()
    ax, axp = x[pos], x[neg]
    e_inv_x = float(np.sum(w_x / ax))
    e_inv_xp = float(np.sum(w_xp / axp))
    atoms_u = np.concatenate([[0.0], ax])
    weights_u = np.concatenate([[max(1.0 - e_inv_x, 0.0)], w_x / ax])
    atoms_v = np.concatenate([[0.0], axp])
    weights_v = np.concatenate([[max(1.0 - e_inv_xp, 0.0)], w_xp / axp])
    gap = e_inv_x - e_inv_xp
    expected = 2.0 * closed_form_error(L, a, b)
    if not math.isfinite(gap) or abs(gap - expected) > 1e-6 * expected:
        raise SolverError(
            f"prior-pair gap {gap!r} disagrees with closed form {expected!r} "
            f"(L={L}, nu={nu}, lam={lam})"
        )
    pair = PriorPair(
        atoms_u=atoms_u, weights_u=weights_u,
        atoms_v=atoms_v, weights_v=weights_v,
        L=L, nu=nu, lam=lam, gap=gap,
    )
    pair.validate()
    return pair


def poisson_tail_bound(lam: float, m: int) -> float:
    """Chernoff bound on P[Poi(lam) > m]; exact 0 for lam = 0."""
    if lam <= 0.0:
        return 0.0
    m1 = m + 1
    if m1 <= lam:
        return 1.0
    return math.exp(-lam + m1 - m1 * math.log(m1 / lam))


@dataclass(frozen=True)
class TvEstimate:
    """Certified bracket for a total variation distance: lower <= TV <= upper."""

    lower: float
    upper: float
    tail_bound: float
    cutoff: int


def tv_exact_atoms(
    atoms_a: np.ndarray, weights_a: np.ndarray,
    atoms_b: np.ndarray, weights_b: np.ndarray,
    scale: float, cutoff: Optional[int] = None,
) -> TvEstimate:
    """TV between the Poisson mixtures of two atomic distributions scaled by ``scale``.

    The pmf difference is summed exactly up to ``cutoff``; the discarded tail
    is covered by a Chernoff bound, giving a certified lower/upper bracket.
    """
    if scale < 0:
        raise ParameterError(f"scale must be >= 0, got {scale}")
    atoms_a = np.asarray(atoms_a, dtype=float)
    atoms_b = np.asarray(atoms_b, dtype=float)
    lam_a = scale * atoms_a
    lam_b = scale * atoms_b
    lam_max_a = float(lam_a.max(initial=0.0))
    lam_max_b = float(lam_b.max(initial=0.0))
    lam_max = max(lam_max_a, lam_max_b)
    if cutoff is None:
        cutoff = max(int(math.ceil(lam_max)) + 1, 8)
        while poisson_tail_bound(lam_max, cutoff) >= 0.5 * _TAIL_CERT:
            cutoff = max(cutoff + 4, int(cutoff * 1.25))
    tail = 0.5 * (poisson_tail_bound(lam_max_a, cutoff) + poisson_tail_bound(lam_max_b, cutoff))
    if tail >= _TAIL_CERT:
        raise PrecisionError(
            f"cutoff {cutoff} leaves Poisson tail bound {tail:.3e} >= {_TAIL_CERT}; increase it"
        )
    js = np.arange(cutoff + 1)
    pmf_a = poisson.pmf(js[:, None], lam_a[None, :]) @ np.asarray(weights_a, dtype=float)
    pmf_b = poisson.pmf(js[:, None], lam_b[None, :]) @ np.asarray(weights_b, dtype=float)
    truncated = 0.5 * float(np.abs(pmf_a - pmf_b).sum())
    return TvEstimate(
        lower=truncated,
        upper=min(truncated + tail, 1.0),
        tail_bound=tail,
        cutoff=int(cutoff),
    )


def tv_exact(pair: PriorPair, scale: float, cutoff: Optional[int] = None) -> TvEstimate:
    """TV(E[Poi(scale*U)], E[Poi(scale*U')]) for a moment-matched prior pair."""
    return tv_exact_atoms(
        pair.atoms_u, pair.weights_u, pair.atoms_v, pair.weights_v, scale, cutoff
    )


@dataclass(frozen=True)
class TvBound:
    """Moment-matching TV bound: ``value`` is the smaller of the two displayed forms."""

    full: float
    simplified: float
    value: float


def tv_bound(lam_max: float, L: int) -> TvBound:
    """Upper bound on the TV between Poisson mixtures of variables on [0, lam_max]
    sharing their first L moments."""
    if lam_max <= 0:
        raise ParameterError(f"lam_max must be > 0, got {lam_max}")
    if L < 1:
        raise ParameterError(f"L must be >= 1, got {L}")
    half = lam_max / 2.0
    full = half ** (L + 1) / math.factorial(L + 1) * (
        2.0 + 2.0 ** (half - L) + 2.0 ** (lam_max / (2.0 * math.log(2.0)) - L)
    )
    simplified = (math.e * lam_max / (2.0 * L)) ** L
    return TvBound(full=full, simplified=simplified, value=min(full, simplified))


@dataclass(frozen=True)
class LeCamCertificate:
    """Numeric certificate for the Poissonized sample-complexity lower bound.

    When ``valid``, no estimator can achieve additive error
    ``implied_epsilon * k`` with failure probability <= 0.1 using a
    Poissonized sample of size n (over the nu-approximate parameter space).
    """

    valid: bool
    lhs: float
    gap: float
    implied_epsilon: float
    meets_target: bool
    terms: tuple


def lecam_certificate(
    k: float, n: float, epsilon: float, L: int, lam: float, nu: float, alpha: float
) -> LeCamCertificate:
    """Evaluate the two-prior indistinguishability condition at explicit parameters.

    Builds the moment-matched pair on {0} U [1+nu, lam], takes its gap d and
    checks  2*lam/(k*nu^2) + 2/(k*alpha^2*d^2) + k*(e*n*lam/(2*k*L))^L <= 0.6.
    """
    if not 0.0 < alpha < 0.5:
        raise ParameterError(f"alpha must be in (0, 1/2), got {alpha}")
    if nu <= 0.0:
        raise ParameterError(f"nu must be > 0, got {nu}")
    if k < 2 or n < 0:
        raise ParameterError(f"need k >= 2 and n >= 0, got k={k}, n={n}")
    pair = construct_prior_pair(L, nu, lam)
    d = pair.gap
    t1 = 2.0 * lam / (k * nu**2)
    t2 = 2.0 / (k * alpha**2 * d**2)
    t3 = k * (math.e * n * lam / (2.0 * k * L)) ** L
    lhs = t1 + t2 + t3
    implied = (1.0 - 2.0 * alpha) * d / 2.0
    return LeCamCertificate(
        valid=bool(lhs <= 0.6),
        lhs=float(lhs),
        gap=float(d),
        implied_epsilon=float(implied),
        meets_target=bool(implied >= epsilon),
        terms=(float(t1), float(t2), float(t3)),
    )


def lecam_recipe(k: float, epsilon: float, c0: float = 1.0, gamma: float = 2.4) -> dict:
    """Parameter choices for the certificate as functions of (k, epsilon).

    L = floor(c0 ln k), lam = (gamma ln k / ln(1/(2 eps)))^2, alpha = k^(-1/3),
    nu = sqrt(sqrt(lam/k) (1 - 2 eps)); gamma > 2 c0 keeps the separation
    requirement satisfiable.
    """
    if not 0.0 < epsilon < 0.5:
        raise ParameterError(f"epsilon must be in (0, 1/2), got {epsilon}")
    if gamma <= 2.0 * c0:
        raise ParameterError(f"need gamma > 2*c0, got gamma={gamma}, c0={c0}")
    logk = math.log(k)
    L = max(int(math.floor(c0 * logk)), 1)
    lam = (gamma * logk / math.log(1.0 / (2.0 * epsilon))) ** 2
    alpha = k ** (-1.0 / 3.0)
    nu = math.sqrt(math.sqrt(lam / k) * (1.0 - 2.0 * epsilon))
    if lam <= 1.0 + nu:
        raise ParameterError(
            f"recipe degenerate at k={k}, epsilon={epsilon}: lam={lam:.3g} <= 1+nu"
        )
    return {"L": L, "lam": lam, "nu": nu, "alpha": alpha}


@dataclass(frozen=True)
class ExpChebMax:
    """Maximizer and maximum of x -> exp(-beta x) T_L(x) on [1, inf)."""

    x_star: float
    value: float
    log_value: float
    residual: float


def max_exp_cheby(beta: float, L: int) -> ExpChebMax:
    """Maximize exp(-beta x) T_L(x) over x >= 1.

    In y = arccosh(x) the stationarity condition reads
    tanh(L y)/sinh(y) = beta/L; the left side decreases strictly from L to 0,
    so the root is found by bisection after doubling out a bracket.  For
    beta >= L^2 the function is decreasing on all of [1, inf) and the
    maximum sits at the boundary x = 1.
    """
    if beta <= 0:
        raise ParameterError(f"beta must be > 0, got {beta}")
    if L < 1:
        raise ParameterError(f"L must be >= 1, got {L}")
    target = beta / L
    if target >= L:
        return ExpChebMax(x_star=1.0, value=math.exp(-beta), log_value=-beta, residual=0.0)

    def g(y: float) -> float:
        return math.tanh(L * y) / math.sinh(y)

    lo = 1e-12
    hi = 1.0
    while g(hi) > target:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-17 * hi:
            break
    y = 0.5 * (lo + hi)
    x_star = math.cosh(y)
    # log cosh(L y) = L y + log((1 + exp(-2 L y))/2), overflow-safe
    log_tl = L * y + math.log1p(math.exp(-2.0 * L * y)) - math.log(2.0)
    log_value = -beta * x_star + log_tl
    try:
        value = math.exp(log_value)
    except OverflowError:
        value = math.inf
    # residual of alpha*tanh(L y) = sinh(y), the scaled stationarity equation
    residual = abs((L / beta) * math.tanh(L * y) - math.sinh(y))
    return ExpChebMax(x_star=x_star, value=value, log_value=log_value, residual=residual)


def rate_envelope(k: float, n: float) -> float:
    """Exponent shape of the minimax risk: max(sqrt(n ln k / k), n/k, 1)."""
    if k < 2:
        raise ParameterError(f"k must be >= 2, got {k}")
    if n < 0:
        raise ParameterError(f"n must be >= 0, got {n}")
    return max(math.sqrt(n * math.log(k) / k), n / k, 1.0)
