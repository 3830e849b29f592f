"""Modified Bessel functions K_nu(x), K_{i tau}(x), and integer-order I_m(x).

Everything is built on the real integral representation

    K_nu(x)  = int_0^inf exp(-x cosh u) cosh(nu u) du,   x > 0,

which for purely imaginary order nu = i*tau becomes the damped-oscillatory
cosine integral with kernel cos(tau*u).  Keeping the arithmetic real and
letting the quadrature module handle the oscillation avoids complex-order
series altogether.

Order caps: beyond nu = 60 (real) or tau = 100 (imaginary) the integral
representation needs node counts past what the engine will spend, so the
evaluators refuse instead of silently degrading.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .quadrature import (
    CrossCheckReport,
    DEFAULT_SPEC,
    QuadratureSpec,
    integrate_damped_oscillatory,
    integrate_semi_infinite,
)

__all__ = [
    "REAL_ORDER_CAP",
    "IMAG_ORDER_CAP",
    "OrderTooLargeError",
    "bessel_k_real",
    "bessel_k_imag",
    "bessel_i_int",
    "check_k_asymptotics",
    "k_imag_matrix",
    "k_imag_many",
    "k_real_many",
]

REAL_ORDER_CAP = 60.0
IMAG_ORDER_CAP = 100.0

# Ceiling on work-array cells (~34 MB of float64) for the matrix evaluators.
_MATRIX_CELL_CAP = 1 << 22

# exp() overflows just past this exponent.
_EXP_GUARD = 700.0


class OrderTooLargeError(ValueError):
    """Order too large for the integral representation at this argument."""


def bessel_k_real(nu: float, x: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """K_nu(x) for real order nu >= 0 via the cosh integral representation."""
    if x <= 0:
        raise ValueError("x must be > 0")
    if nu < 0:
        raise ValueError("nu must be >= 0 (K is even in its order)")
    if nu > REAL_ORDER_CAP:
        raise OrderTooLargeError(f"nu={nu:g} exceeds real order cap {REAL_ORDER_CAP:g}")

    # Peak of nu*u - x*cosh(u) sits at sinh(u) = nu/x; if the integrand
    # exceeds the float range there, refuse rather than overflow.
    if nu > 0:
        u_peak = math.asinh(nu / x)
        if nu * u_peak - math.hypot(nu, x) > _EXP_GUARD:
            raise OrderTooLargeError(
                f"cosh({nu:g}*u) overflows inside the truncated range for x={x:g}"
            )

    def f(u: np.ndarray) -> np.ndarray:
        # cosh(nu*u)*exp(-x*cosh(u)) with the exponents combined so neither
        # factor overflows on its own.
        damp = x * np.cosh(u)
        return 0.5 * (np.exp(nu * u - damp) + np.exp(-nu * u - damp))

    def damping(u: float) -> float:
        return x * math.cosh(u) - nu * u

    res = integrate_semi_infinite(f, spec, damping=damping)
    return float(res.value)


def bessel_k_imag(tau: float, x: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """K_{i tau}(x): real-valued, oscillatory in log x near 0.

    Equals bessel_k_real(0, x) at tau = 0; |K_{i tau}(x)| <= K_0(x) always.
    """
    if x <= 0:
        raise ValueError("x must be > 0")
    if tau < 0:
        raise ValueError("tau must be >= 0")
    if tau > IMAG_ORDER_CAP:
        raise OrderTooLargeError(f"tau={tau:g} exceeds imaginary order cap {IMAG_ORDER_CAP:g}")

    res = integrate_damped_oscillatory(
        lambda u: np.exp(-x * np.cosh(u)),
        tau,
        spec,
        damping=lambda u: x * math.cosh(u),
        kind="cos",
    )
    return float(res.value)


def bessel_i_int(m: int, x: float, rel_term_tol: float = 1e-16) -> float:
    """I_m(x) for integer m >= 0 by direct power series.

    The series sum_k (x/2)^(2k+m) / (k! (k+m)!) needs no asymptotics at this
    toolkit's argument range (|x| <= ~60); terms peak near k ~ |x|/2 and the
    sum stops once a term drops below rel_term_tol of the partial sum, with
    a hard cutoff at 500 terms.  Negative x is allowed: I_m(-x) = (-1)^m I_m(x).
    """
    if m < 0 or m != int(m):
        raise ValueError("m must be a nonnegative integer")
    m = int(m)
    half = x / 2.0
    term = half**m / math.factorial(m)
    total = term
    q = half * half
    for k in range(500):
        term *= q / ((k + 1.0) * (k + 1.0 + m))
        total += term
        if abs(term) < rel_term_tol * abs(total) and k >= m:
            break
    return total


def k_imag_matrix(
    taus: Sequence[float],
    xs: Sequence[float],
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> np.ndarray:
    """K_{i tau_j}(x_i) on a shared u-grid, returned as an (len(xs), len(taus)) array.

    All (x, tau) pairs reuse one composite Gauss-Legendre grid in u, so the
    whole matrix is two rank-3 BLAS products per refinement level.  The grid
    is sized by the slowest-damping x (smallest) and the fastest oscillation
    (largest tau); panels halve globally until the matrix stabilizes row-wise
    relative to each row's own scale.
    """
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(xs <= 0):
        raise ValueError("x must be > 0")
    if np.any(taus < 0):
        raise ValueError("tau must be >= 0")
    if np.any(taus > IMAG_ORDER_CAP):
        raise OrderTooLargeError(f"tau exceeds imaginary order cap {IMAG_ORDER_CAP:g}")

    # Nested quadratures hand this routine node vectors from both their axes
    # at once; without a ceiling the result matrix alone can outgrow memory.
    if xs.size * taus.size > _MATRIX_CELL_CAP:
        half = taus.size // 2
        return np.concatenate(
            [k_imag_matrix(taus[:half], xs, spec), k_imag_matrix(taus[half:], xs, spec)],
            axis=1,
        )

    x_min = float(xs.min())
    x_max = float(xs.max())
    tau_max = float(taus.max())
    T = spec.tail_target + 5.0
    U = math.acosh(1.0 + T / x_min)
    # Steepest exponent slope x*sinh(u) along any x's cutoff shoulder.
    rate = math.sqrt(T * T + 2.0 * T * x_max)
    width = min(U / 16.0, 4.0 / rate)
    if tau_max > 0:
        width = min(width, math.pi / (4.0 * tau_max))
    n_panels = max(16, int(math.ceil(U / width)))

    from .quadrature import _GL_NODES, _GL_WEIGHTS  # shared rule

    prev = None
    eps = float(np.finfo(float).eps)
    for level in range(spec.max_refinements + 1):
        edges = np.linspace(0.0, U, n_panels + 1)
        h = np.diff(edges)
        u = (edges[:-1, None] + (0.5 * (_GL_NODES + 1.0))[None, :] * h[:, None]).ravel()
        w = ((0.5 * _GL_WEIGHTS)[None, :] * h[:, None]).ravel()
        cur = np.zeros((xs.size, taus.size))
        row_l1 = np.zeros(xs.size)
        step = max(1, _MATRIX_CELL_CAP // max(xs.size, taus.size))
        for j0 in range(0, u.size, step):
            uj = u[j0:j0 + step]
            E = np.exp(-np.outer(xs, np.cosh(uj)))                    # (nx, nuj)
            C = np.cos(np.outer(uj, taus)) * w[j0:j0 + step, None]    # (nuj, ntau)
            cur += E @ C
            row_l1 += E @ w[j0:j0 + step]
        if prev is not None:
            # Per-row tolerance with a roundoff floor: the cosine integral
            # cancels down from samples of mass K_0(x) = row_l1, so double
            # precision cannot place a row closer than eps * that mass.
            row_err = np.abs(cur - prev).max(axis=1)
            row_scale = np.abs(cur).max(axis=1)
            allow = np.maximum(max(spec.rel_tol, 1e-15) * row_scale, 8.0 * eps * row_l1)
            if bool(np.all(row_err <= allow)):
                return cur
        prev = cur
        n_panels *= 2
    return cur


def k_imag_many(tau: float, xs: Sequence[float], spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """K_{i tau}(x) for one tau and many x (one column of k_imag_matrix)."""
    return k_imag_matrix([tau], xs, spec)[:, 0]


def k_real_many(nu: float, xs: Sequence[float], spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """K_nu(x) for one real order nu >= 0 and many x, on a shared u-grid."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(xs <= 0):
        raise ValueError("x must be > 0")
    if nu < 0 or nu > REAL_ORDER_CAP:
        raise OrderTooLargeError(f"nu={nu:g} outside [0, {REAL_ORDER_CAP:g}]")

    x_min = float(xs.min())
    x_max = float(xs.max())
    T = spec.tail_target + 5.0
    # Truncate where x_min*cosh(u) - nu*u clears the target.
    U = math.acosh(1.0 + T / x_min)
    while x_min * math.cosh(U) - nu * U < T:
        U *= 1.25
    if nu * U > _EXP_GUARD or (nu > 0 and nu * math.asinh(nu / x_min) - math.hypot(nu, x_min) > _EXP_GUARD):
        raise OrderTooLargeError(f"cosh({nu:g}*u) overflows for x_min={x_min:g}")
    rate = math.sqrt(T * T + 2.0 * T * x_max) + nu
    n_panels = max(16, int(math.ceil(U / min(U / 16.0, 4.0 / rate))))

    from .quadrature import _GL_NODES, _GL_WEIGHTS

    prev = None
    for level in range(spec.max_refinements + 1):
        edges = np.linspace(0.0, U, n_panels + 1)
        h = np.diff(edges)
        u = (edges[:-1, None] + (0.5 * (_GL_NODES + 1.0))[None, :] * h[:, None]).ravel()
        w = ((0.5 * _GL_WEIGHTS)[None, :] * h[:, None]).ravel()
        damp = np.outer(xs, np.cosh(u))
        vals = 0.5 * (np.exp(nu * u[None, :] - damp) + np.exp(-nu * u[None, :] - damp))
        cur = vals @ w
        if prev is not None:
            err = float((np.abs(cur - prev) / np.maximum(np.abs(cur), 1e-300)).max())
            if err <= max(spec.rel_tol, 1e-15):
                return cur
        prev = cur
        n_panels *= 2
    return cur


def check_k_asymptotics(
    x_grid: Sequence[float],
    nu: float = 0.0,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> CrossCheckReport:
    """Compare K_nu on a grid against its applicable asymptote.

    For x >= 5 the asymptote is sqrt(pi/(2x)) e^{-x} (any fixed small order);
    for x <= 0.05 and nu = 0 it is -log(x), which also certifies that
    K_0(x) + log(x) stays bounded.  The grid must sit inside one regime.
    The report passes when the deviations |K/asymptote - 1| are nonincreasing
    along the grid (toward the asymptote's limit) and the final one is <= 0.1.
    A nonmonotone deviation sequence is reported as an infinite discrepancy.
    """
    xs = [float(x) for x in x_grid]
    if not xs:
        raise ValueError("x_grid must be nonempty")
    if all(x >= 5.0 for x in xs):
        regime = "large-x"
        xs = sorted(xs)
        asym = [math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) for x in xs]
    elif all(x <= 0.05 for x in xs):
        if nu != 0.0:
            raise ValueError("small-x log asymptote implemented for nu=0 only")
        regime = "small-x"
        xs = sorted(xs, reverse=True)
        asym = [-math.log(x) for x in xs]
    else:
        raise ValueError("grid must lie in one asymptotic regime (x>=5 or x<=0.05)")

    vals = [bessel_k_real(nu, x, spec) for x in xs]
    devs = [abs(v / a - 1.0) for v, a in zip(vals, asym)]
    monotone = all(d2 <= d1 * (1.0 + 1e-12) for d1, d2 in zip(devs, devs[1:]))
    final = devs[-1]
    passed = monotone and final <= 0.1
    context = (
        f"K_{nu:g} {regime} asymptote: devs="
        + "[" + ", ".join(f"{d:.3e}" for d in devs) + "]"
        + ("" if monotone else " (not monotone)")
    )
    shown = final if monotone else math.inf
    return CrossCheckReport(
        lhs=vals[-1],
        rhs=asym[-1],
        abs_diff=shown * abs(asym[-1]) if math.isfinite(shown) else math.inf,
        rel_diff=shown,
        tolerance=0.1,
        passed=passed,
        context=context,
    )
