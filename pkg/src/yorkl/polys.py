"""Exact construction and numerical study of the polynomial system p_n.

The polynomials arise by iterating the operator A_x = x^2 - x(d/dx)x(d/dx)
on e^{-x}:  A_x^n e^{-x} = e^{-x} p_n(x).  They satisfy

    p_{n+1}(x) = x^2 p_n''(x) + x(1 - 2x) p_n'(x) - x p_n(x),   p_0 = 1,

have an explicit double-sum coefficient formula, alternate in coefficient
sign, and carry leading coefficient (-1)^n (2n-1)!!.  All coefficient work
here is exact big-integer arithmetic; floating point enters only at
evaluation time, so the combinatorial identity checks are genuinely exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bessel import IMAG_ORDER_CAP, bessel_i_int, k_imag_many
from .quadrature import (
    CrossCheckReport,
    DEFAULT_SPEC,
    QuadratureSpec,
    integrate_log_split,
    integrate_semi_infinite,
    make_report,
)

__all__ = [
    "BigRational",
    "ExactPolynomial",
    "BoundParams",
    "ConsistencyError",
    "InsufficientTruncationError",
    "poly_explicit",
    "poly_recurrence",
    "poly_eval",
    "verify_identities",
    "generating_check",
    "poly_series_bessel",
    "poly_bound",
    "poly_asymptotic_ratio",
    "bernoulli_exact",
    "verify_bernoulli_integral",
    "poly_kl_image",
]

# Exact rational with reduced form and positive denominator, as required for
# the Bernoulli values; the stdlib Fraction already guarantees both.
BigRational = Fraction


class ConsistencyError(RuntimeError):
    """An exact identity that must hold by construction failed (a bug)."""


class InsufficientTruncationError(ValueError):
    """Series truncated before its terms have passed their peak."""


def _double_factorial_odd(n: int) -> int:
    """(2n-1)!! = 1*3*5*...*(2n-1); equals 1 for n = 0."""
    return math.prod(range(1, 2 * n, 2))


@dataclass(frozen=True)
class ExactPolynomial:
    """p_n as a degree-indexed vector of exact integer coefficients.

    coeffs[k] is the coefficient of x^k.  Construction enforces the
    structural facts p_n(0) = 0 (n >= 1) and a_{n,n} = (-1)^n (2n-1)!!,
    so a malformed coefficient vector cannot be represented.
    """

    degree: int
    coeffs: tuple

    def __post_init__(self):
        n = self.degree
        if n < 0 or len(self.coeffs) != n + 1:
            raise ValueError("coeffs must have length degree + 1")
        if n == 0:
            if self.coeffs != (1,):
                raise ValueError("p_0 = 1")
            return
        if self.coeffs[0] != 0:
            raise ValueError("p_n(0) = 0 requires a zero constant term")
        if self.coeffs[-1] != (-1) ** n * _double_factorial_odd(n):
            raise ValueError("leading coefficient must be (-1)^n (2n-1)!!")


def _explicit_sum(k: int, n: int) -> int:
    """Integer-scaled double sum 2^k * k! * a_{k,n}.

    The printed coefficient formula carries weights (-1)^r/2^r and
    (-1)^j/2^j; multiplying through by 2^k keeps every term an integer
    (2^{k-r-j} with j <= k-r), which preserves the exactness of the
    identity checks and makes the final division a bug detector.
    """
    s = 0
    for r in range(k + 1):
        cr = math.comb(k, r)
        for j in range(k - r + 1):
            term = ((-1) ** (r + j)) * (1 << (k - r - j)) * cr * math.comb(k - r, j)
            s += term * (r - j) ** (2 * n)
    return s


def poly_explicit(n: int) -> ExactPolynomial:
    """Build p_n from the explicit coefficient double sum, exactly.

    Every coefficient must reduce to an integer after division by 2^k k!;
    a remainder signals an implementation bug, not bad input.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return ExactPolynomial(0, (1,))
    coeffs = [0]
    for k in range(1, n + 1):
        s = _explicit_sum(k, n)
        den = (1 << k) * math.factorial(k)
        if s % den != 0:
            raise ConsistencyError(f"coefficient a_{{{k},{n}}} is not an integer")
        coeffs.append(s // den)
    return ExactPolynomial(n, tuple(coeffs))


def poly_recurrence(n: int) -> ExactPolynomial:
    """Build p_n by iterating the differential recurrence from p_0 = 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    a = [1]
    for _ in range(n):
        m = len(a) - 1
        b = [0] * (m + 2)
        for j in range(m + 2):
            # x^2 p'' + x p' contributes j^2 a_j; -2x^2 p' - x p shifts to
            # -(2j-1) a_{j-1}.
            term = j * j * a[j] if j <= m else 0
            if j >= 1:
                term -= (2 * j - 1) * a[j - 1]
            b[j] = term
        a = b
    return ExactPolynomial(n, tuple(a))


def poly_eval(p: ExactPolynomial, x: float) -> float:
    """Horner evaluation of the exact coefficients in floating point."""
    acc = 0.0
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def _poly_values(p: ExactPolynomial, xs: np.ndarray) -> np.ndarray:
    return np.polyval(np.asarray(p.coeffs[::-1], dtype=float), xs)


def verify_identities(n_max: int) -> CrossCheckReport:
    """Exact combinatorial identities of the coefficient double sum.

    For every n <= n_max the bare double sum (with its 2^{-r-j} weights)
    must vanish for k = n+1..2n and equal (-1)^n n! (2n-1)!! at k = n.
    All comparisons are exact big-integer/rational equalities.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    checks = 0
    failures = []
    for n in range(1, n_max + 1):
        for k in range(n + 1, 2 * n + 1):
            checks += 1
            if _explicit_sum(k, n) != 0:
                failures.append((n, k))
        checks += 1
        bare = Fraction(_explicit_sum(n, n), 1 << n)
        if bare != Fraction((-1) ** n * math.factorial(n) * _double_factorial_odd(n)):
            failures.append((n, n))
    context = f"coefficient identities n<={n_max}: {checks} exact checks"
    if failures:
        context += f", first failure at (n,k)={failures[0]}"
    return CrossCheckReport(
        lhs=float(len(failures)),
        rhs=0.0,
        abs_diff=float(len(failures)),
        rel_diff=float(len(failures)),
        tolerance=0.0,
        passed=not failures,
        context=context,
    )


@dataclass(frozen=True)
class BoundParams:
    """Parameter pair (epsilon, alpha) for the p_n upper bound.

    Valid range: epsilon in (1 - sqrt(3)/2, 1] and
    alpha in (0, 2*arccos(sqrt(1 + 4(1-epsilon)^2)/2)], which keeps
    2*cos(alpha/2)*sqrt(v^2+1) >= v + 2(1-epsilon) for all v >= 0.
    """

    epsilon: float
    alpha: float

    def __post_init__(self):
        lo = 1.0 - math.sqrt(3.0) / 2.0
        if not (lo < self.epsilon <= 1.0):
            raise ValueError(f"epsilon must lie in ({lo:.6f}, 1]")
        if not (0.0 < self.alpha <= self.alpha_max(self.epsilon)):
            raise ValueError("alpha outside its admissible interval for this epsilon")

    @staticmethod
    def alpha_max(epsilon: float) -> float:
        return 2.0 * math.acos(math.sqrt(1.0 + 4.0 * (1.0 - epsilon) ** 2) / 2.0)


def _log_pow2_plus(n4: int, c: float) -> float:
    """log(2^n4 + c) computed stably for large n4."""
    return n4 * math.log(2.0) + math.log1p(c * math.exp(-n4 * math.log(2.0)))


def _log_poly_bound(n: int, x: float, params: BoundParams) -> float:
    """Natural log of the poly_bound value; finite even where exp overflows."""
    a = params.alpha
    return 0.5 * (
        _log_pow2_plus(4 * n, -1.0)
        + math.lgamma(4 * n + 1)
        + math.log(math.sin(a / 2.0))
        - math.log(math.pi * n)
        - 4 * n * math.log(a)
        - _log_pow2_plus(4 * n - 2, 6.0 / math.pi**2 - 1.0)
    ) + params.epsilon * x - math.log(2.0)


def poly_bound(n: int, x: float, params: BoundParams) -> float:
    """Upper bound for |p_n(x)|:

        sqrt( (2^{4n}-1)(4n)! sin(a/2) / (pi n a^{4n} (2^{4n-2} + 6/pi^2 - 1)) )
        * e^{eps x} / 2.

    Evaluated in log space; returns inf once it exceeds the float range.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if x <= 0:
        raise ValueError("x must be > 0")
    L = _log_poly_bound(n, x, params)
    return math.exp(L) if L < 709.0 else math.inf


def _tail_bound(x: float, t: float, N: int, params: BoundParams) -> float:
    """Bound on the generating-series remainder past index N via poly_bound.

    Terms bound(n)*t^{2n}/(2n)! are assembled in log space: the bound alone
    overflows a float near n ~ 90 while the full term keeps shrinking
    (geometric ratio about (2t/alpha)^2 < 1 inside the radius guard).
    """
    if t == 0.0:
        return 0.0
    log_t2 = 2.0 * math.log(abs(t))
    total = 0.0
    for n in range(N + 1, N + 2000):
        log_term = _log_poly_bound(n, x, params) + n * log_t2 - math.lgamma(2 * n + 1)
        if log_term > 709.0:
            return math.inf
        term = math.exp(log_term)
        total += term
        if term < 1e-30 * max(total, 1.0):
            break
    return total


def generating_check(x: float, t: float, N: int, params: BoundParams | None = None) -> CrossCheckReport:
    """Partial generating series vs exp(-2x sinh^2(t/2)).

    Sums p_n(x) t^{2n}/(2n)! through n = N and compares against the closed
    exponential; the discrepancy must stay below the bound-based remainder
    estimate (plus float roundoff).  The remainder series converges only for
    2|t| < alpha, which is the radius guard enforced here; the default
    parameter pair (1, 2*pi/3) admits |t| < pi/3.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    if N > 60:
        raise ValueError("N > 60: (2N)! leaves the float range")
    if params is None:
        params = BoundParams(1.0, BoundParams.alpha_max(1.0))
    if 2.0 * abs(t) >= params.alpha:
        raise ValueError(
            f"|t|={abs(t):g} at or beyond the bound radius alpha/2={params.alpha / 2:g}"
        )
    partial = 0.0
    roundoff_scale = 0.0
    for n in range(N + 1):
        term = poly_eval(poly_explicit(n), x) * t ** (2 * n) / math.factorial(2 * n)
        partial += term
        roundoff_scale += abs(term)
    exact = math.exp(-2.0 * x * math.sinh(t / 2.0) ** 2)
    tol = max(_tail_bound(x, t, N, params), 64 * np.finfo(float).eps * max(roundoff_scale, abs(exact)))
    return make_report(partial, exact, tol, f"generating series x={x:g} t={t:g} N={N}")


def poly_series_bessel(n: int, x: float, M: int) -> float:
    """p_n(x) from the absolutely convergent series 2 e^x sum (-1)^m m^{2n} I_m(x).

    The terms m^{2n} I_m(x) peak near m* = max(2n, e*x/2); truncating before
    the peak is unsound and raises.  Within the allowance M the sum stops
    early once m >= 2n and a term falls below 1e-16 of the partial sum.
    """
    if n < 0 or x <= 0:
        raise ValueError("need n >= 0 and x > 0")
    peak = max(2 * n, math.e * x / 2.0)
    if M < peak:
        raise InsufficientTruncationError(
            f"M={M} is below the term-peak index ~{peak:.0f} for n={n}, x={x:g}"
        )
    total = 0.0
    for m in range(1, M + 1):
        term = (-1) ** m * float(m) ** (2 * n) * bessel_i_int(m, x)
        total += term
        if m >= 2 * n and abs(term) < 1e-16 * abs(total):
            break
    return 2.0 * math.exp(x) * total


def poly_asymptotic_ratio(n: int, x: float, beta: float) -> float:
    """p_n(x) divided by the candidate large-n main term

        6 x (-1)^n sin(beta) (2n)! e^x / (pi beta^{2n} (2n+1)^3).

    The main term depends on the free parameter beta although p_n(x) does
    not, so ratios for different beta cannot all converge to 1; this routine
    exists to record that study rather than to assert the asymptotic.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (0.0 < beta < math.pi / 2.0):
        raise ValueError("beta must lie in (0, pi/2)")
    if x <= 0:
        raise ValueError("x must be > 0")
    log_main = (
        math.log(6.0 * x * math.sin(beta) / math.pi)
        + math.lgamma(2 * n + 1)
        + x
        - 2 * n * math.log(beta)
        - 3.0 * math.log(2 * n + 1)
    )
    sign_main = (-1) ** n
    val = poly_eval(poly_explicit(n), x)
    if val == 0.0:
        return 0.0
    ratio = math.copysign(math.exp(math.log(abs(val)) - log_main), val * sign_main)
    return ratio


_BERNOULLI_CACHE: list = [Fraction(1)]


def bernoulli_exact(k: int) -> Fraction:
    """Exact Bernoulli number B_k for even k in [2, 400].

    Built by the defining recurrence sum_{j=0}^{m} C(m+1, j) B_j = 0 in
    rational arithmetic (so B_1 = -1/2 internally, irrelevant for even k).
    """
    if k % 2 != 0:
        raise ValueError("k must be even")
    if not (2 <= k <= 400):
        raise ValueError("k must lie in [2, 400]")
    while len(_BERNOULLI_CACHE) <= k:
        m = len(_BERNOULLI_CACHE)
        acc = Fraction(0)
        for j in range(m):
            acc += math.comb(m + 1, j) * _BERNOULLI_CACHE[j]
        _BERNOULLI_CACHE.append(-acc / (m + 1))
    return _BERNOULLI_CACHE[k]


def verify_bernoulli_integral(n: int, spec: QuadratureSpec = DEFAULT_SPEC) -> CrossCheckReport:
    """int_0^inf tau^{4n-1}/sinh(tau) dtau against -B_{4n} (2^{4n}-1) pi^{4n} / (4n)."""
    if not (1 <= n <= 10):
        raise ValueError("n must lie in [1, 10] (quadrature overflow guard)")
    p = 4 * n - 1

    def f(u: np.ndarray) -> np.ndarray:
        return u**p / np.sinh(u)

    def damping(u: float) -> float:
        return u - math.log(2.0) - p * math.log(max(u, 1.0))

    lhs = float(integrate_semi_infinite(f, spec, damping=damping).value)
    rhs = float(-bernoulli_exact(4 * n) * ((1 << (4 * n)) - 1) / (4 * n)) * math.pi ** (4 * n)
    return make_report(lhs, rhs, 1e-8, f"Bernoulli integral n={n}")


def poly_kl_image(n: int, tau: float, spec: QuadratureSpec = DEFAULT_SPEC) -> CrossCheckReport:
    """Kontorovich-Lebedev image of p_n against its closed form.

        int_0^inf K_{i tau}(x) e^{-x} p_n(x) dx/x = (-1)^n pi tau^{2n-1} / sinh(pi tau)

    The left side is quadrature with a log substitution below x = 1 (the
    kernel oscillates in log x there, and p_n(x)/x stays bounded since
    p_n(0) = 0); the right side is the closed form.
    """
    if not (1 <= n <= 10):
        raise ValueError("n must lie in [1, 10]")
    if not (0.0 < tau <= IMAG_ORDER_CAP):
        raise ValueError(f"tau must lie in (0, {IMAG_ORDER_CAP:g}]")
    p = poly_explicit(n)
    abs_sum = float(sum(abs(c) for c in p.coeffs))

    def f(xs: np.ndarray) -> np.ndarray:
        return k_imag_many(tau, xs, spec) * np.exp(-xs) * _poly_values(p, xs) / xs

    def origin_damping(v: float) -> float:
        # |K e^-x p_n(x)| <= (v + 1) * abs_sum * e^-v for x = e^-v <= 1.
        return v - math.log(v + 2.0) - math.log(abs_sum) - 1.0

    def tail_damping(s: float) -> float:
        x = 1.0 + s
        return 2.0 * x - (n - 1) * math.log(x + 1.0) - math.log(1.4 * abs_sum)

    lhs = float(
        integrate_log_split(f, spec, origin_damping=origin_damping, tail_damping=tail_damping).value
    )
    rhs = (-1) ** n * math.pi * tau ** (2 * n - 1) / math.sinh(math.pi * tau)
    return make_report(lhs, rhs, 1e-6, f"KL image of p_{n} at tau={tau:g}")
