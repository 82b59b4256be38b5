"""Shifted Chebyshev polynomials and the estimator weight table.

The degree-L Chebyshev polynomial T_L is rescaled to an interval [l, r] and
normalized so the result equals -1 at the origin:

    P_L(x) = -T_L((2x - r - l)/(r - l)) / T_L(-(r + l)/(r - l)) = sum_j a_j x^j

The linear-estimator weights are g[j] = a_j * j! / n^j + 1 for 1 <= j <= L and
g[0] = 0.  Because the a_j alternate in sign with large magnitudes, every
coefficient is computed in exact rational arithmetic and rounded only once, at
the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True, eq=False)
class CoefficientTable:
    """Monomial coefficients a_0..a_L of P_L on [l, r] and weights g[0..L] for sample size n.

    ``_a_lo`` and ``_g_lo`` hold the rounding residual of each exact rational
    coefficient beyond its double in ``a``/``g`` (a double-double
    representation), so downstream checks are not limited by the storage
    rounding; estimation itself only ever needs the doubles.
    """

    L: int
    l: float
    r: float
    n: float
    a: np.ndarray
    g: np.ndarray
    _a_lo: np.ndarray = None
    _g_lo: np.ndarray = None


def cheb_eval(L: int, x: float) -> float:
    """Evaluate T_L(x) for any real x.

    Uses cos(L arccos x) on [-1, 1] and the root z of z + 1/z = 2x outside,
    with the parity T_L(-x) = (-1)^L T_L(x) for x < -1.
    """
    if L < 0:
        raise ParameterError(f"degree must be >= 0, got {L}")
    if x < 0:
        return (-1) ** L * cheb_eval(L, -x)
    if x <= 1.0:
        return math.cos(L * math.acos(x))
    z = x + math.sqrt((x - 1.0) * (x + 1.0))
    zl = z**L
    return 0.5 * (zl + 1.0 / zl)


def _cheb_derivs_exact(L: int, x: Fraction, jmax: int) -> list[Fraction]:
    """[T_L(x), T_L'(x), ..., T_L^(jmax)(x)] in exact rational arithmetic.

    Differentiating the three-term recurrence j times gives
    T_{m+1}^(j) = 2x T_m^(j) + 2j T_m^(j-1) - T_{m-1}^(j).
    """
    prev = [Fraction(1)] + [Fraction(0)] * jmax
    if L == 0:
        return prev
    curr = [x] + ([Fraction(1)] + [Fraction(0)] * (jmax - 1) if jmax >= 1 else [])
    for _ in range(1, L):
        nxt = []
        for j in range(jmax + 1):
            v = 2 * x * curr[j] - prev[j]
            if j >= 1:
                v += 2 * j * curr[j - 1]
            nxt.append(v)
        prev, curr = curr, nxt
    return curr


def cheb_derivatives(L: int, x: float, jmax: int) -> np.ndarray:
    """Derivative values T_L^(0..jmax)(x), exact internally, rounded on return."""
    if not 0 <= jmax <= L:
        raise ParameterError(f"need 0 <= jmax <= L, got jmax={jmax}, L={L}")
    vals = _cheb_derivs_exact(L, Fraction(x), jmax)
    return np.array([float(v) for v in vals])


def _shifted_coeffs_exact(L: int, l, r) -> list[Fraction]:
    if L < 1:
        raise ParameterError(f"degree must be >= 1, got {L}")
    lf, rf = Fraction(l), Fraction(r)
    if not 0 < lf < rf:
        raise ParameterError(f"need 0 < l < r, got l={l}, r={r}")
    x0 = -(rf + lf) / (rf - lf)
    derivs = _cheb_derivs_exact(L, x0, L)
    t0 = derivs[0]
    scale = Fraction(2) / (rf - lf)
    return [-(scale**j) * derivs[j] / (math.factorial(j) * t0) for j in range(L + 1)]


def shifted_coeffs(L: int, l: float, r: float) -> np.ndarray:
    """Monomial coefficients a_0..a_L of P_L on [l, r]; a_0 is exactly -1."""
    return np.array([float(a) for a in _shifted_coeffs_exact(L, l, r)])


def g_table(L: int, l: float, r: float, n) -> CoefficientTable:
    """Weight table g[j] = a_j * j!/n^j + 1 (g[0] = 0), rationals rounded once."""
    if n < 1:
        raise ParameterError(f"sample size n must be >= 1, got {n}")
    a_exact = _shifted_coeffs_exact(L, l, r)
    nf = Fraction(n)
    g_exact = [a_exact[j] * math.factorial(j) / nf**j + 1 for j in range(L + 1)]
    a_hi = [float(v) for v in a_exact]
    a_lo = [float(v - Fraction(h)) for v, h in zip(a_exact, a_hi)]
    g_hi = [float(v) for v in g_exact]
    g_lo = [float(v - Fraction(h)) for v, h in zip(g_exact, g_hi)]
    return CoefficientTable(
        L=L,
        l=float(l),
        r=float(r),
        n=float(n),
        a=np.array(a_hi),
        g=np.array(g_hi),
        _a_lo=np.array(a_lo),
        _g_lo=np.array(g_lo),
    )


# error-free float transformations for the compensated Horner scheme

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a: float, b: float):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a: float, b: float):
    p = a * b
    ca = _SPLITTER * a
    ahi = ca - (ca - a)
    alo = a - ahi
    cb = _SPLITTER * b
    bhi = cb - (cb - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def poly_eval(table: CoefficientTable, x: float) -> float:
    """P_L(x) by Horner's scheme with error-free compensation.

    The a_j alternate in sign and largely cancel on [l, r], so each product
    and sum carries its rounding error forward in a parallel accumulator,
    together with the stored low-order coefficient parts; the result matches
    the direct T_L form to near machine precision.
    """
    a = table.a
    a_lo = table._a_lo if table._a_lo is not None else np.zeros_like(a)
    s = float(a[-1])
    comp = float(a_lo[-1])
    for j in range(len(a) - 2, -1, -1):
        p, ep = _two_prod(s, x)
        s, es = _two_sum(p, float(a[j]))
        comp = comp * x + (ep + es + float(a_lo[j]))
    return s + comp


def poly_eval_direct(table: CoefficientTable, x: float) -> float:
    """P_L(x) via the defining ratio of Chebyshev values (no monomial expansion)."""
    l, r, L = table.l, table.r, table.L
    t = (2.0 * x - r - l) / (r - l)
    t0 = -(r + l) / (r - l)
    return -cheb_eval(L, t) / cheb_eval(L, t0)
