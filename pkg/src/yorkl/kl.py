"""Kontorovich-Lebedev transform pair, Parseval identity, convolution ring,
Macdonald formula, heat kernel, and the semigroup law.

The forward transform integrates the argument of K_{i tau} over (0, inf):

    (Gf)(tau) = int_0^inf K_{i tau}(r) f(r) dr,

with inversion f(r) = (2/(r pi^2)) int_0^inf tau sinh(pi tau) K_{i tau}(r)
(Gf)(tau) dtau and Parseval identity

    int tau sinh(pi tau) |(Gf)(tau)|^2 dtau = (pi^2/2) int |f(r)|^2 r dr.

The convolution under which G factorizes is the double integral

    (f*h)(x) = (1/2x) int int exp(-(x(u^2+y^2)/(uy) + uy/x)/2) f(u) h(y) du dy.

This module evaluates it in the rotated coordinates u = m e^{s/2},
y = m e^{-s/2} (du dy = m dm ds), where the kernel exponent becomes
-x cosh(s) - m^2/(2x): the two blow-up directions u,y -> 0 collapse into a
single Gaussian factor and nothing overflows prematurely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.interpolate import CubicSpline

from .bessel import (
    IMAG_ORDER_CAP,
    REAL_ORDER_CAP,
    bessel_k_imag,
    bessel_k_real,
    k_imag_many,
    k_imag_matrix,
    k_real_many,
)
from .quadrature import (
    CrossCheckReport,
    DEFAULT_SPEC,
    EvalResult,
    QuadratureSpec,
    UnboundedTailError,
    _find_truncation,
    integrate_finite,
    integrate_log_split,
    integrate_semi_infinite,
    make_report,
)

__all__ = [
    "SampledFunction",
    "ClosedForm",
    "TestFunction",
    "HeatKernelPoint",
    "TailModelError",
    "DivergenceGuardError",
    "RingMembershipError",
    "ParameterWindowError",
    "exp_decay",
    "kl_forward",
    "kl_forward_many",
    "kl_inverse",
    "parseval_check",
    "kl_convolution",
    "kl_convolution_many",
    "factorization_check",
    "macdonald_check",
    "heat_kernel",
    "heat_kernel_many",
    "heat_kernel_translation",
    "semigroup_check",
    "l_alpha_norm",
]


class TailModelError(ValueError):
    """Declared tail model inconsistent with the sampled decay."""


class DivergenceGuardError(ValueError):
    """Declared spectral decay too weak for the sinh-weighted inversion."""


class RingMembershipError(ValueError):
    """Function outside the convolution ring (norm diverges)."""


class ParameterWindowError(ValueError):
    """Parameters outside the supported evaluation window."""


# Supported (t, argument) window shared by the density and heat-kernel ops.
T_WINDOW = (0.2, 10.0)
R_MAX = 50.0

# Width of the tau/e target blocks handed to the kernel-matrix evaluator by
# vector transforms; keeps nested-quadrature work arrays bounded.
_TAU_BLOCK = 64


def _check_window(t: float, *coords: float) -> None:
    if not (T_WINDOW[0] <= t <= T_WINDOW[1]):
        raise ParameterWindowError(f"t={t:g} outside supported window [{T_WINDOW[0]}, {T_WINDOW[1]}]")
    for c in coords:
        if not (0.0 < c <= R_MAX):
            raise ParameterWindowError(f"argument {c:g} outside supported window (0, {R_MAX:g}]")


@dataclass
class SampledFunction:
    """Function known on a strictly increasing positive grid, with a declared
    tail model past the last sample.

    Between samples the values are interpolated (natural cubic spline or
    linear); below the first grid point the first value is extended as a
    constant (every function tabulated here is bounded at 0); above the last
    grid point the tail model applies: identically zero, or
    values[-1]*exp(-rate*(x - grid[-1])).
    """

    grid: np.ndarray
    values: np.ndarray
    interpolation: str = "cubic"
    tail_model: str = "zero"
    tail_rate: Optional[float] = None
    small_x_power: float = 0.0
    label: str = ""
    _spline: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.grid.ndim != 1 or self.grid.shape != self.values.shape:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if self.grid[0] <= 0 or np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing and positive")
        if self.interpolation not in ("linear", "cubic"):
            raise ValueError("interpolation must be 'linear' or 'cubic'")
        if self.tail_model not in ("zero", "exponential"):
            raise ValueError("tail_model must be 'zero' or 'exponential'")
        if self.tail_model == "exponential":
            if self.tail_rate is None or not self.tail_rate > 0:
                raise ValueError("exponential tail needs rate > 0")

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.empty_like(x)
        lo = x < self.grid[0]
        hi = x > self.grid[-1]
        mid = ~(lo | hi)
        out[lo] = self.values[0]
        if self.interpolation == "cubic":
            if self._spline is None:
                self._spline = CubicSpline(self.grid, self.values, bc_type="natural")
            out[mid] = self._spline(x[mid])
        else:
            out[mid] = np.interp(x[mid], self.grid, self.values)
        if self.tail_model == "zero":
            out[hi] = 0.0
        else:
            out[hi] = self.values[-1] * np.exp(-self.tail_rate * (x[hi] - self.grid[-1]))
        return out[0] if scalar else out

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass
class ClosedForm:
    """Closed-form test function with the decay metadata the transforms need.

    damping(x) must bound -log|fn(x)| from below for large x; small_x_power
    p declares |fn(x)| = O(x^p) as x -> 0; bound_near_zero bounds |fn| on
    (0, 1].
    """

    fn: Callable[[np.ndarray], np.ndarray]
    damping: Callable[[float], float]
    small_x_power: float = 0.0
    bound_near_zero: float = 1.0
    label: str = ""

    def __call__(self, x):
        return self.fn(np.asarray(x, dtype=float))


TestFunction = Union[SampledFunction, ClosedForm]


def exp_decay() -> ClosedForm:
    return ClosedForm(
        fn=lambda x: np.exp(-x),
        damping=lambda x: x,
        small_x_power=0.0,
        bound_near_zero=1.0,
        label="exp(-x)",
    )


@dataclass
class HeatKernelPoint:
    """One heat-kernel value h_t(x, y); x*value is symmetric in (x, y)."""

    t: float
    x: float
    y: float
    value: float


def _inner_spec(spec: QuadratureSpec) -> QuadratureSpec:
    # Iterated integrals: inner level runs one decade tighter so its error
    # does not pollute the outer error estimate.
    return replace(spec, rel_tol=spec.rel_tol / 10.0, abs_tol=spec.abs_tol / 10.0)


def _origin_bound(f: TestFunction) -> float:
    if isinstance(f, SampledFunction):
        return f.max_abs() + 1e-300
    return f.bound_near_zero + 1e-300


def _global_bound(f: TestFunction) -> float:
    if isinstance(f, SampledFunction):
        return f.max_abs() + 1e-300
    probe = np.abs(f(np.geomspace(1e-6, 30.0, 80)))
    return 2.0 * float(probe.max()) + f.bound_near_zero + 1e-300


def _tail_damping(f: TestFunction) -> Callable[[float], float]:
    """Lower bound on -log|f(1+s)| for the [1, inf) leg of split integrals."""
    if isinstance(f, ClosedForm):
        return lambda s: f.damping(1.0 + s)
    x_end = f.grid[-1]
    floor = -math.log(f.max_abs() + 1e-300)
    if f.tail_model == "zero":
        return lambda s: floor if 1.0 + s <= x_end else math.inf
    rate = f.tail_rate
    v_end = abs(f.values[-1]) + 1e-300
    return lambda s: floor if 1.0 + s <= x_end else rate * (1.0 + s - x_end) - math.log(v_end)


def _check_tail(f: TestFunction) -> None:
    """Declared-tail consistency for sampled functions.

    An exponential tail must roughly match the log-slope of the last samples;
    a zero tail must only cut off values that have already decayed.
    """
    if not isinstance(f, SampledFunction):
        return
    v_end = abs(float(f.values[-1]))
    scale = f.max_abs()
    if f.tail_model == "zero":
        if v_end > 1e-5 * scale:
            raise TailModelError(
                f"zero tail declared but |f| at the grid end is {v_end:.3e} "
                f"({v_end / scale:.1e} of the peak)"
            )
        return
    k = min(12, len(f.grid) - 1)
    seg_v = np.abs(f.values[-k - 1:]) + 1e-300
    if np.any(seg_v <= 1e-280):
        return  # tail already underflowed; model irrelevant
    slope = -(math.log(seg_v[-1]) - math.log(seg_v[0])) / (f.grid[-1] - f.grid[-1 - k])
    if slope <= 0 or not (0.4 * slope <= f.tail_rate <= 2.5 * slope):
        raise TailModelError(
            f"exponential tail rate {f.tail_rate:g} inconsistent with sampled "
            f"log-slope {slope:g}"
        )


def _require_ring(f: TestFunction) -> None:
    if f.small_x_power <= -1.0:
        raise RingMembershipError(
            f"small-x power {f.small_x_power:g} makes the K_0-weighted norm diverge"
        )


# ---------------------------------------------------------------------------
# Transform pair


def kl_forward(f: TestFunction, tau: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """(Gf)(tau) = int_0^inf K_{i tau}(r) f(r) dr.

    Below r = 1 the kernel oscillates in log r, so that leg runs under the
    log substitution; above, both kernel and test function decay at least
    exponentially.
    """
    if not (0.0 <= tau <= IMAG_ORDER_CAP):
        raise ValueError(f"tau must lie in [0, {IMAG_ORDER_CAP:g}]")
    return float(kl_forward_many(f, [tau], spec)[0])


def kl_forward_many(
    f: TestFunction, taus: Sequence[float], spec: QuadratureSpec = DEFAULT_SPEC
) -> np.ndarray:
    """Forward transform at several tau sharing one adaptive r-grid.

    tau is processed in narrow blocks: outer quadratures pass their whole
    node vector here, and the adaptive r-grid underneath can run to tens of
    thousands of points, so an unblocked kernel matrix would be huge.
    """
    # The kernel stays bounded near zero, so the transform exists exactly on
    # the K_0-weighted ring.
    _require_ring(f)
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    _check_tail(f)
    m0 = _origin_bound(f)
    f_tail = _tail_damping(f)

    def origin_damping(v: float) -> float:
        # |K_{i tau}(x)| <= K_0(x) <= v + 1 for x = e^-v <= 1.
        return v - math.log(v + 2.0) - math.log(m0) - 1.0

    def tail_damping(s: float) -> float:
        # K_0(1+s) <= 1.4 e^{-(1+s)}.
        return (1.0 + s) - math.log(1.4) + f_tail(s)

    parts = []
    for j0 in range(0, taus.size, _TAU_BLOCK):
        sub = taus[j0:j0 + _TAU_BLOCK]

        def g(xs: np.ndarray) -> np.ndarray:
            return k_imag_matrix(sub, xs, spec) * np.asarray(f(xs), dtype=float)[:, None]

        res = integrate_log_split(g, spec, origin_damping=origin_damping, tail_damping=tail_damping)
        parts.append(np.atleast_1d(np.asarray(res.value, dtype=float)))
    return np.concatenate(parts)


def _k_imag_log_bound(tau: float, r: float, k0_cache: dict) -> float:
    """min over contour tilts delta of [-delta*tau + log K_0(r cos delta)].

    Rigorous pointwise bound |K_{i tau}(r)| <= e^{-delta tau} K_0(r cos delta)
    for any delta in [0, pi/2); evaluated on a small delta grid.
    """
    best = math.inf
    for delta in (0.0, math.pi / 4, 3 * math.pi / 8, 7 * math.pi / 16, math.pi / 2 - 0.02):
        if delta not in k0_cache:
            k0_cache[delta] = bessel_k_real(0.0, r * math.cos(delta))
        best = min(best, -delta * tau + math.log(k0_cache[delta]))
    return best


def kl_inverse(
    g: Callable[[np.ndarray], np.ndarray],
    r: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    g_damping: Callable[[float], float],
) -> float:
    """f(r) = (2/(r pi^2)) int_0^inf tau sinh(pi tau) K_{i tau}(r) g(tau) dtau.

    ``g_damping(tau)`` must bound -log|g(tau)| from below.  Because
    sinh(pi tau) grows like e^{pi tau} and the kernel contributes decay
    e^{-delta tau} for every tilt delta < pi/2, the integral converges only
    when g decays faster than e^{-pi tau / 2}; weaker declared decay raises
    DivergenceGuardError.
    """
    if r <= 0:
        raise ValueError("r must be > 0")
    k0_cache: dict = {}

    def damping(tau: float) -> float:
        kb = _k_imag_log_bound(tau, r, k0_cache)
        return (
            g_damping(tau)
            - math.pi * tau
            - kb
            - math.log((tau + 1.0) / (r * math.pi**2))
        )

    try:
        _find_truncation(damping, spec.tail_target)
    except UnboundedTailError as exc:
        raise DivergenceGuardError(
            "declared decay of g is too weak against tau*sinh(pi*tau)*K_{i tau}(r)"
        ) from exc

    def integrand(taus: np.ndarray) -> np.ndarray:
        gv = np.asarray(g(taus), dtype=float)
        return taus * np.sinh(math.pi * taus) * k_imag_matrix(taus, [r], spec)[0, :] * gv

    res = integrate_semi_infinite(integrand, spec, damping=damping)
    return 2.0 / (r * math.pi**2) * float(res.value)


def parseval_check(f: TestFunction, spec: QuadratureSpec = DEFAULT_SPEC) -> CrossCheckReport:
    """int tau sinh(pi tau) |(Gf)(tau)|^2 dtau  vs  (pi^2/2) int |f(r)|^2 r dr."""
    _check_tail(f)
    m0 = _origin_bound(f)
    f_tail = _tail_damping(f)
    inner = _inner_spec(spec)

    def rhs_g(xs: np.ndarray) -> np.ndarray:
        v = np.asarray(f(xs), dtype=float)
        return v * v * xs

    rhs_res = integrate_log_split(
        rhs_g,
        spec,
        # (f^2 x) * x jacobian = f^2 e^{-2v}
        origin_damping=lambda v: 2.0 * v - 2.0 * math.log(m0) - 1.0,
        tail_damping=lambda s: 2.0 * f_tail(s) - math.log(2.0 + s),
    )
    rhs = math.pi**2 / 2.0 * float(rhs_res.value)

    def lhs_integrand(taus: np.ndarray) -> np.ndarray:
        gv = kl_forward_many(f, taus, inner)
        return taus * np.sinh(math.pi * taus) * gv * gv

    # Truncation probes only steer the cut, so they run on a cheap spec.
    probe_spec = replace(
        spec,
        rel_tol=max(spec.rel_tol, 1e-4),
        abs_tol=max(spec.abs_tol, 1e-12),
        max_refinements=min(spec.max_refinements, 6),
        truncation_log_decades=min(spec.truncation_log_decades, 8.0),
    )

    def image(tau: float) -> float:
        return float(kl_forward_many(f, [tau], probe_spec)[0])

    g1 = image(1.0)
    scale0 = math.sinh(math.pi) * g1 * g1 + 1e-300
    mass = max(abs(image(0.0)), abs(g1)) + 1e-300

    # Every kernel value carries absolute roundoff near eps*K_0(x), so a
    # computed image sits on a noise floor of about eps * int |f| K_0 long
    # after the true image (which decays faster than e^{-pi tau/2} on the
    # ring) has dropped below it.  tau*sinh(pi*tau) amplifies the squared
    # floor like tau*e^{pi tau}; past the tau where that amplified floor
    # reaches theta the samples are meaningless and the true contribution is
    # negligible, so the declared damping turns into a steep wall there.
    eps = float(np.finfo(float).eps)
    noise = 128.0 * eps * mass
    theta = max(spec.abs_tol, 1e-3 * spec.rel_tol * scale0)
    tau_wall = 8.0
    for _ in range(50):
        new = (
            math.log(2.0 * theta) - 2.0 * math.log(noise) - math.log(max(tau_wall, 1.0))
        ) / math.pi
        new = min(max(new, 2.0), IMAG_ORDER_CAP - 2.0)
        if abs(new - tau_wall) < 1e-9:
            break
        tau_wall = new

    def lhs_damping(u: float) -> float:
        if u >= tau_wall:
            return spec.tail_target + 1.0e3 * (u - tau_wall)
        w = image(u)
        v = u * math.sinh(math.pi * u) * w * w
        return math.log(scale0) - math.log(v + 1e-300)

    lhs = float(integrate_semi_infinite(lhs_integrand, spec, damping=lhs_damping).value)
    label = getattr(f, "label", "") or "f"
    return make_report(lhs, rhs, 1e-5, f"Parseval identity for {label}")


# ---------------------------------------------------------------------------
# Convolution ring


def kl_convolution_many(
    f: TestFunction,
    h: TestFunction,
    xs: Sequence[float],
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> np.ndarray:
    """(f*h)(x) for a batch of x, in rotated coordinates.

    With u = m e^{s/2}, y = m e^{-s/2} the double integral becomes
    (1/2x) int_{-S}^{S} e^{-x cosh s} int_0^M e^{-m^2/(2x)} f(m e^{s/2})
    h(m e^{-s/2}) m dm ds; the s-legs and the m-leg are iterated adaptive
    1-d quadratures sharing an x block as vector components.  Large batches
    (forward transforms probing the convolution on their own node grids)
    run block by block to keep the iterated work arrays bounded.
    """
    _require_ring(f)
    _require_ring(h)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(xs <= 0):
        raise ValueError("x must be > 0")
    if xs.size > _TAU_BLOCK:
        return np.concatenate([
            kl_convolution_many(f, h, xs[j0:j0 + _TAU_BLOCK], spec)
            for j0 in range(0, xs.size, _TAU_BLOCK)
        ])
    x_min = float(xs.min())
    x_max = float(xs.max())
    target = spec.tail_target
    mf = _global_bound(f)
    mh = _global_bound(h)
    margin = max(0.0, math.log(mf * mh / (2.0 * x_min))) + 5.0
    S = math.acosh(1.0 + (target + margin) / x_min)
    M = math.sqrt(2.0 * x_max * (target + margin))
    inner = _inner_spec(spec)
    # The m-integrand peaks near sqrt(2x) with O(1) width in log m, so the
    # inner integral runs on the log grid; uniform panels on [0, M] cannot
    # see the peak once x sits many decades below M^2.  Mass below e^w_lo
    # is under mf*mh*e^{2 w_lo}/2, negligible after the 1/(2 x_min) division.
    w_hi = math.log(M)
    w_lo = 0.5 * (math.log(x_min) - target - math.log(mf * mh)) - 2.0
    n0 = max(8, int(math.ceil(w_hi - w_lo)))

    def outer(svals: np.ndarray) -> np.ndarray:
        out = np.empty((svals.size, xs.size))
        for i, s in enumerate(svals):
            ep = math.exp(s / 2.0)

            def inner_w(w: np.ndarray) -> np.ndarray:
                m = np.exp(w)
                fv = np.asarray(f(m * ep), dtype=float)
                hv = np.asarray(h(m / ep), dtype=float)
                return (fv * hv * m * m)[:, None] * np.exp(-np.outer(m * m, 1.0 / (2.0 * xs)))

            out[i] = np.asarray(
                integrate_finite(inner_w, w_lo, w_hi, inner, min_panels=n0).value
            )
        return out * np.exp(-np.outer(np.cosh(svals), xs)) / (2.0 * xs)[None, :]

    res = integrate_finite(outer, -S, S, spec)
    return np.atleast_1d(np.asarray(res.value, dtype=float))


def kl_convolution(
    f: TestFunction, h: TestFunction, x: float, spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    return float(kl_convolution_many(f, h, [x], spec)[0])


def factorization_check(
    f: TestFunction, h: TestFunction, tau: float, spec: QuadratureSpec = DEFAULT_SPEC
) -> CrossCheckReport:
    """G[f*h](tau) (triple quadrature) vs (Gf)(tau)*(Gh)(tau).

    The left side never uses the factorization: the convolution values feed
    a fresh forward transform, so the two routes are independent.
    """
    _require_ring(f)
    _require_ring(h)
    inner = _inner_spec(spec)
    # The check answers at 1e-4, so the convolution runs on a capped budget
    # with a hundredfold margin instead of inheriting a full-precision spec.
    conv_spec = replace(
        spec,
        rel_tol=max(spec.rel_tol / 10.0, 1e-7),
        abs_tol=max(spec.abs_tol / 10.0, 1e-12),
        truncation_log_decades=min(spec.truncation_log_decades, 10.0),
        max_refinements=min(spec.max_refinements, 10),
    )

    # The forward transform probes the convolution on hundreds of nodes, and
    # a fresh double quadrature at every node repeats identical inner work,
    # so the convolution is tabulated once and forwarded as a sampled
    # function.  For inputs bounded away from zero at the origin the
    # convolution keeps growing like a power of log(1/x), so the grid runs
    # to 1e-6; the constant extension below that leaves under 1e-5 of the
    # answer through the oscillating kernel, noise against the tolerance.
    x_hi = min(conv_spec.tail_target, 40.0) + 5.0
    xs_tab = np.concatenate(
        [
            np.geomspace(1e-6, 1.0, 192, endpoint=False),
            np.linspace(1.0, x_hi, int(4.0 * (x_hi - 1.0)) + 2),
        ]
    )
    vals = kl_convolution_many(f, h, xs_tab, conv_spec)
    # Ring members decay at least exponentially, so the product does too; the
    # rate is fitted over the last stretch of samples to keep the declared
    # tail consistent with the sampled slope.
    n_fit = 13
    slope = (math.log(abs(vals[-n_fit])) - math.log(abs(vals[-1]))) / (
        xs_tab[-1] - xs_tab[-n_fit]
    )
    fl = getattr(f, "label", "") or "f"
    hl = getattr(h, "label", "") or "h"
    conv_fn = SampledFunction(
        grid=xs_tab,
        values=vals,
        tail_model="exponential",
        tail_rate=max(slope, 0.05),
        label=f"{fl}*{hl}",
    )
    lhs = kl_forward(conv_fn, tau, inner)
    rhs = kl_forward(f, tau, inner) * kl_forward(h, tau, inner)
    return make_report(lhs, rhs, 1e-4, f"factorization G[{fl}*{hl}] at tau={tau:g}")


def macdonald_check(
    tau: float, x: float, y: float, spec: QuadratureSpec = DEFAULT_SPEC
) -> CrossCheckReport:
    """K_nu(x) K_nu(y) vs (1/2) int e^{-(r(x^2+y^2)/(xy)+xy/r)/2} K_nu(r) dr/r
    for nu = i*tau (tau = 0 gives the real order-zero case).

    The integral runs on the log grid r = e^w, where dr/r = dw and both
    kernel cut-offs A e^w, B e^{-w} are explicit.
    """
    if x <= 0 or y <= 0:
        raise ValueError("x, y must be > 0")
    A = (x * x + y * y) / (2.0 * x * y)
    B = x * y / 2.0
    reach = spec.tail_target + 5.0
    w_hi = math.log(reach / A)
    w_lo = -math.log(reach / B)

    def g(w: np.ndarray) -> np.ndarray:
        r = np.exp(w)
        return np.exp(-A * r - B / r) * k_imag_many(tau, r, spec)

    integral = float(integrate_finite(g, w_lo, w_hi, spec).value)
    lhs = bessel_k_imag(tau, x, spec) * bessel_k_imag(tau, y, spec)
    return make_report(lhs, 0.5 * integral, 1e-8, f"Macdonald product tau={tau:g} x={x:g} y={y:g}")


# ---------------------------------------------------------------------------
# Heat kernel and semigroup


def _tau_max(t: float, spec: QuadratureSpec) -> float:
    """Positive root of t tau^2/2 - pi tau/2 = D ln 10: spectral truncation."""
    half = math.pi / (2.0 * t)
    return half + math.sqrt(half * half + 2.0 * spec.tail_target / t)


def heat_kernel(
    t: float, x: float, y: float, spec: QuadratureSpec = DEFAULT_SPEC
) -> HeatKernelPoint:
    """h_t(x,y) = (2/(x pi^2)) int e^{-t tau^2/2} tau sinh(pi tau)
    K_{i tau}(x) K_{i tau}(y) dtau."""
    _check_window(t, x, y)
    value = float(heat_kernel_many(t, x, np.array([y]), spec)[0])
    return HeatKernelPoint(t=t, x=x, y=y, value=value)


def heat_kernel_many(
    t: float, x: float, ys: Sequence[float], spec: QuadratureSpec = DEFAULT_SPEC
) -> np.ndarray:
    """h_t(x, y) for a batch of y sharing one spectral integration.

    For small arguments K_{i tau}(z) oscillates in tau like
    cos(tau log(2/z)), so the tau grid is seeded at that frequency; the
    kernel matrix bounds its own memory, so the batch is not split.
    """
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    tm = _tau_max(t, spec)
    xs = np.concatenate(([x], ys))
    freq = max(1.0, math.log(2.0 / float(xs.min())))
    n0 = min(max(8, int(math.ceil(tm * freq / 6.0)) + 8), 16384)

    def integrand(taus: np.ndarray) -> np.ndarray:
        K = k_imag_matrix(taus, xs, spec)
        w = 0.5 * taus * (np.exp(math.pi * taus - 0.5 * t * taus**2)
                          - np.exp(-math.pi * taus - 0.5 * t * taus**2))
        return w[:, None] * K[0, :, None] * K[1:, :].T

    res = integrate_finite(integrand, 0.0, tm, spec, min_panels=n0)
    return 2.0 / (x * math.pi**2) * np.atleast_1d(np.asarray(res.value, dtype=float))


def heat_kernel_translation(
    t: float,
    x: float,
    y: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    density: Optional[SampledFunction] = None,
) -> float:
    """h_t(x,y) by the translation form (1/2x) int e^{-(s(x^2+y^2)/(xy)+xy/s)/2} F_t(s) ds.

    Independent of the spectral product route: the kernel product never
    appears, only the density itself.  By default the density is evaluated
    exactly at the quadrature nodes; passing a tabulation trades accuracy
    (its interpolation error, around 1e-6) for speed.
    """
    _check_window(t, x, y)
    if density is None:
        from .yor import _spectral_values

        inner = _inner_spec(spec)

        def fvals(r: np.ndarray) -> np.ndarray:
            return _spectral_values(r, t, inner)[0]
    else:
        def fvals(r: np.ndarray) -> np.ndarray:
            return np.asarray(density(r), dtype=float)

    A = (x * x + y * y) / (2.0 * x * y)
    B = x * y / 2.0
    reach = spec.tail_target + 5.0
    w_hi = math.log(reach / A)
    w_lo = -math.log(reach / B)

    def g(w: np.ndarray) -> np.ndarray:
        r = np.exp(w)
        return np.exp(-A * r - B / r) * fvals(r) * r

    integral = float(integrate_finite(g, w_lo, w_hi, spec).value)
    return integral / (2.0 * x)


def semigroup_check(
    t1: float, t2: float, r: float, spec: QuadratureSpec = DEFAULT_SPEC
) -> CrossCheckReport:
    """int_0^inf h_{t1}(r, y) F_{t2}(y) dy  vs  F_{t1+t2}(r)."""
    _check_window(t1, r)
    _check_window(t2, r)
    _check_window(t1 + t2, r)
    from .yor import tabulate_density, yor_spectral

    inner = _inner_spec(spec)
    f2 = tabulate_density(t2, spec)
    probe_spec = replace(
        spec,
        rel_tol=max(spec.rel_tol, 1e-4),
        abs_tol=max(spec.abs_tol, 1e-12),
        max_refinements=min(spec.max_refinements, 6),
        truncation_log_decades=min(spec.truncation_log_decades, 8.0),
    )

    def probe(y: float) -> float:
        h = abs(float(heat_kernel_many(t1, r, [y], probe_spec)[0]))
        return h * abs(float(f2(y)))

    # Crude amplitude bound for h_{t1}(r, .) F_{t2} from two probes.
    mh = 5.0 * max(probe(1.0), probe(0.01)) + 1e-300
    p_ref = probe(1.0) + probe(0.25) + 1e-300

    def origin_damping(v: float) -> float:
        # Both factors vanish like a Gaussian in log y, which no simple
        # pointwise bound captures; the cut is probed directly.  e^-v is
        # the log-grid jacobian.
        w = probe(math.exp(-v)) * math.exp(-v)
        return math.log(p_ref) - math.log(w + 1e-300)

    def g(ys: np.ndarray) -> np.ndarray:
        return heat_kernel_many(t1, r, ys, inner) * np.asarray(f2(ys), dtype=float)

    res = integrate_log_split(
        g,
        spec,
        origin_damping=origin_damping,
        tail_damping=lambda s: 1.8 * (1.0 + s) - math.log(2.0 * mh + 2.0),
    )
    lhs = float(res.value)
    rhs = yor_spectral(r, t1 + t2, spec).value
    return make_report(lhs, rhs, 1e-4, f"semigroup t1={t1:g} t2={t2:g} r={r:g}")


def l_alpha_norm(f: TestFunction, alpha: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Norm int_0^inf |f(x)| K_alpha(x) dx of the convolution-ring scale.

    Symmetric in the sign of alpha (K is even in its order).  When the
    declared small-x power of f cannot pay for the x^{-|alpha|} kernel
    blow-up the norm diverges and inf is returned as the divergence flag.
    """
    a = abs(alpha)
    if a > REAL_ORDER_CAP:
        raise ValueError(f"|alpha| must not exceed {REAL_ORDER_CAP:g}")
    p = f.small_x_power
    if a > 0 and p - a <= -1.0:
        return math.inf
    _check_tail(f)
    m0 = _origin_bound(f)
    f_tail = _tail_damping(f)
    # K_a(x) <= Gamma(a) 2^{a-1} x^{-a} near 0 (a > 0); K_0(x) <= -log x + 1.
    log_c = math.lgamma(a) + (a - 1.0) * math.log(2.0) if a > 0 else 0.0

    def g(xs: np.ndarray) -> np.ndarray:
        return np.abs(np.asarray(f(xs), dtype=float)) * k_real_many(a, xs, spec)

    def origin_damping(v: float) -> float:
        return (1.0 + p - a) * v - math.log(v + 2.0) - math.log(m0) - log_c - 1.0

    def tail_damping(s: float) -> float:
        return f_tail(s) + (1.0 + s) - math.log(1.4) - a * a / 2.0

    res = integrate_log_split(g, spec, origin_damping=origin_damping, tail_damping=tail_damping)
    return float(res.value)
