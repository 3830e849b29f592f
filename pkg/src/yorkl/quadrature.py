"""Adaptive quadrature engine for smooth, damped, and damped-oscillatory integrands.

The core rule is composite 10-point Gauss-Legendre with global panel doubling.
The error estimate is the difference between the last two refinement levels,
which is conservative for the analytic integrands this toolkit feeds it
(Gauss-Legendre converges superalgebraically there, so the previous level
dominates the true error of the current one).

Semi-infinite integrals are truncated where a caller-supplied lower bound on
the damping exponent reaches ``truncation_log_decades`` decades; oscillatory
integrals are panelled so every half-period gets at least eight panels before
any refinement happens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Union

import numpy as np

__all__ = [
    "QuadratureSpec",
    "EvalResult",
    "CrossCheckReport",
    "QuadratureError",
    "EvaluationError",
    "UnboundedTailError",
    "FrequencyCapError",
    "integrate_finite",
    "integrate_semi_infinite",
    "integrate_damped_oscillatory",
    "integrate_log_split",
    "make_report",
    "EXACTNESS_DEGREE",
    "FREQUENCY_CAP",
]

# 10-point Gauss-Legendre: exact for polynomials through degree 19.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)
EXACTNESS_DEGREE = 19

#: Largest oscillation frequency integrate_damped_oscillatory accepts.
FREQUENCY_CAP = 1.0e4

# Truncation scan gives up past this abscissa.
_SCAN_CAP = 1.0e6

_EPS = float(np.finfo(float).eps)

Integrand = Callable[[np.ndarray], np.ndarray]


class QuadratureError(Exception):
    """Base class for quadrature failures."""


class EvaluationError(QuadratureError):
    """Integrand returned a non-finite value; carries the offending abscissa."""

    def __init__(self, abscissa: float, message: str = ""):
        self.abscissa = abscissa
        super().__init__(message or f"non-finite integrand sample at x={abscissa!r}")


class UnboundedTailError(QuadratureError):
    """No truncation point found below the internal scan cap."""


class FrequencyCapError(QuadratureError):
    """Requested oscillation frequency exceeds the supported cap."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance and truncation policy for one integral evaluation.

    ``truncation_log_decades`` (D) cuts semi-infinite tails where the damping
    exponent exceeds D*ln(10), i.e. where the integrand is provably below
    10**-D of its scale.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_refinements: int = 12
    truncation_log_decades: float = 40.0

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be > 0")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be > 0")
        if self.max_refinements < 1:
            raise ValueError("max_refinements must be >= 1")
        if not self.truncation_log_decades > 0:
            raise ValueError("truncation_log_decades must be > 0")

    @property
    def tail_target(self) -> float:
        return self.truncation_log_decades * math.log(10.0)


DEFAULT_SPEC = QuadratureSpec()


@dataclass
class EvalResult:
    """Value of a numerical integral with its error estimate and node count.

    ``value`` is a float for scalar integrands and an ndarray for
    vector-valued ones (the engine integrates all components on one grid;
    convergence is judged in the max norm across components).
    """

    value: Union[float, np.ndarray]
    error_estimate: float
    nodes_used: int
    converged: bool


@dataclass
class CrossCheckReport:
    """Two independent evaluations of one quantity and their discrepancy.

    ``passed`` is true when the absolute or the relative discrepancy is
    within ``tolerance``.  Inequality checks reuse the type by storing the
    violation amount max(0, lhs - rhs) in ``abs_diff`` with tolerance 0, so
    the same pass criterion applies.
    """

    lhs: float
    rhs: float
    abs_diff: float
    rel_diff: float
    tolerance: float
    passed: bool
    context: str


def make_report(lhs: float, rhs: float, tolerance: float, context: str) -> CrossCheckReport:
    abs_diff = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    rel_diff = abs_diff / scale if scale > 0 else 0.0
    passed = abs_diff <= tolerance or rel_diff <= tolerance
    return CrossCheckReport(lhs, rhs, abs_diff, rel_diff, tolerance, passed, context)


def make_bound_report(value: float, bound: float, context: str) -> CrossCheckReport:
    """Report for an inequality check |value| <= bound (violation in abs_diff)."""
    violation = max(0.0, abs(value) - bound)
    rel = violation / abs(bound) if bound != 0 else (math.inf if violation > 0 else 0.0)
    return CrossCheckReport(abs(value), bound, violation, rel, 0.0, violation <= 0.0, context)


def _panel_points(edges: np.ndarray):
    a = edges[:-1]
    h = np.diff(edges)
    x = a[:, None] + (0.5 * (_GL_NODES + 1.0))[None, :] * h[:, None]
    w = (0.5 * _GL_WEIGHTS)[None, :] * h[:, None]
    return x.ravel(), w.ravel()


def _sample(f: Integrand, x: np.ndarray) -> np.ndarray:
    y = np.asarray(f(x), dtype=float)
    if y.shape[:1] != x.shape:
        raise TypeError(
            f"integrand returned shape {y.shape} for {x.shape[0]} abscissae; "
            "must be (n,) or (n, k)"
        )
    if not np.all(np.isfinite(y)):
        bad = np.where(~np.isfinite(y.reshape(y.shape[0], -1)).all(axis=1))[0][0]
        raise EvaluationError(float(x[bad]))
    return y


def _halve(edges: np.ndarray) -> np.ndarray:
    mid = 0.5 * (edges[:-1] + edges[1:])
    out = np.empty(2 * len(edges) - 1)
    out[0::2] = edges
    out[1::2] = mid
    return out


def _refine(f: Integrand, edges: np.ndarray, spec: QuadratureSpec) -> EvalResult:
    nodes = 0
    prev = None
    cur = None
    err = math.inf
    for _ in range(spec.max_refinements + 1):
        x, w = _panel_points(edges)
        y = _sample(f, x)
        nodes += x.size
        cur = np.tensordot(w, y, axes=(0, 0))
        # No weighted sum can be refined below roundoff of its magnitude mass;
        # once differences sit at that floor further halving is pure cost.
        floor = 8.0 * _EPS * float(np.max(np.tensordot(w, np.abs(y), axes=(0, 0))))
        if prev is not None:
            err = float(np.max(np.abs(cur - prev)))
            scale = float(np.max(np.abs(cur)))
            if err <= max(spec.rel_tol * scale, spec.abs_tol):
                return EvalResult(_scalarize(cur), err, nodes, True)
            if err <= floor:
                return EvalResult(_scalarize(cur), err, nodes, False)
        prev = cur
        edges = _halve(edges)
    return EvalResult(_scalarize(cur), err, nodes, False)


def _scalarize(v):
    return float(v) if np.ndim(v) == 0 else v


def integrate_finite(
    f: Integrand,
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    min_panels: int = 8,
) -> EvalResult:
    """Integrate f over [a, b] with refinement until the spec tolerance.

    f must accept an ndarray of abscissae and return the matching values,
    shape (n,) or (n, k) for k simultaneous components.  ``min_panels`` seeds
    the first level; callers that know an oscillation scale pass it so the
    doubling ladder does not spend levels rediscovering it.
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    edges = np.linspace(a, b, max(8, int(min_panels)) + 1)
    return _refine(f, edges, spec)


def _find_truncation(damping: Callable[[float], float], target: float) -> float:
    # Decay is counted from the level just right of the origin: an integrand
    # that starts already tiny (e^{-x cosh u} with large x says damping(0)=x)
    # must not be cut while it still carries most of its remaining mass.
    d0 = damping(1e-3)
    if math.isfinite(d0) and d0 > 0.0:
        target = target + d0
    u = 1.0
    # Walk down first in case the target is already met well below 1.
    while damping(u) >= target and u > 1e-3:
        u *= 0.5
    while damping(u) < target or damping(min(2.0 * u, _SCAN_CAP)) < target:
        u *= 2.0
        if u > _SCAN_CAP:
            raise UnboundedTailError(
                f"damping bound never reached {target:.1f} below abscissa {_SCAN_CAP:.0e}"
            )
    lo, hi = 0.5 * u, u
    for _ in range(20):
        mid = 0.5 * (lo + hi)
        if damping(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi


def _dyadic_edges(T: float, n_panels: int = 8) -> np.ndarray:
    # Panels graded toward the origin: damped tails carry their mass at small
    # argument, so uniform panels over a long truncated range waste nodes.
    edges = [T / 2.0 ** k for k in range(n_panels)]
    edges.append(0.0)
    return np.array(sorted(edges))


def integrate_semi_infinite(
    f: Integrand,
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    damping: Callable[[float], float],
) -> EvalResult:
    """Integrate f over [0, inf) given a monotone lower bound on its damping.

    ``damping(u)`` must eventually bound -log|f(u)| from below; the tail is
    cut where it reaches truncation_log_decades * ln(10).
    """
    T = _find_truncation(damping, spec.tail_target)
    return _refine(f, _dyadic_edges(T), spec)


def integrate_damped_oscillatory(
    envelope: Integrand,
    frequency: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    damping: Callable[[float], float],
    kind: str = "cos",
) -> EvalResult:
    """Integrate envelope(u) * cos(frequency*u) (or *sin) over [0, inf).

    Each oscillation half-period is split into at least eight panels before
    refinement so the rule resolves the sign structure; the envelope's
    damping bound fixes the truncation point as in integrate_semi_infinite.
    """
    if frequency < 0:
        raise ValueError("frequency must be >= 0")
    if frequency > FREQUENCY_CAP:
        raise FrequencyCapError(f"frequency {frequency:g} exceeds cap {FREQUENCY_CAP:g}")
    if kind == "cos":
        trig = np.cos
    elif kind == "sin":
        trig = np.sin
    else:
        raise ValueError("kind must be 'cos' or 'sin'")

    T = _find_truncation(damping, spec.tail_target)
    width = T / 8.0
    if frequency > 0:
        width = min(width, math.pi / (8.0 * frequency))
    n_panels = max(8, int(math.ceil(T / width)))
    edges = np.linspace(0.0, T, n_panels + 1)

    def f(u: np.ndarray) -> np.ndarray:
        env = np.asarray(envelope(u), dtype=float)
        osc = trig(frequency * u)
        return env * osc if env.ndim == 1 else env * osc[:, None]

    return _refine(f, edges, spec)


def integrate_log_split(
    f: Integrand,
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    origin_damping: Callable[[float], float],
    tail_damping: Callable[[float], float],
    split: float = 1.0,
) -> EvalResult:
    """Integrate f over (0, inf) with a log substitution below ``split``.

    On (0, split] the variable change x = split*exp(-v) turns endpoint
    behavior like log singularities or log-periodic oscillation of the
    Bessel kernel into a smooth exponentially damped integrand on [0, inf).
    ``origin_damping(v)`` bounds -log|f(split*e^-v) * split*e^-v|;
    ``tail_damping(s)`` bounds -log|f(split + s)|.
    """

    def near(v: np.ndarray) -> np.ndarray:
        x = split * np.exp(-v)
        y = np.asarray(f(x), dtype=float)
        return y * x if y.ndim == 1 else y * x[:, None]

    def far(s: np.ndarray) -> np.ndarray:
        return f(split + s)

    # Both damping bounds here are absolute (callers fold the integrand's
    # scale into them), so chasing the tail past abs_tol buys nothing; the
    # cap mostly shortens the near leg, whose v range is log(1/x).
    cap = (-math.log(spec.abs_tol) + 5.0) / math.log(10.0)
    leg_spec = replace(
        spec, truncation_log_decades=min(spec.truncation_log_decades, cap)
    )
    left = integrate_semi_infinite(near, leg_spec, damping=origin_damping)
    right = integrate_semi_infinite(far, leg_spec, damping=tail_damping)
    return EvalResult(
        _scalarize(np.asarray(left.value) + np.asarray(right.value)),
        left.error_estimate + right.error_estimate,
        left.nodes_used + right.nodes_used,
        left.converged and right.converged,
    )
