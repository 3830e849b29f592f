"""Regenerate tests/oracles/frozen.py.

Every number written here is computed away from the package under test:
fixed-step trapezoid or Simpson sums at the step sizes the checks quote,
mpmath quadrature at raised precision, or exact Fraction arithmetic.  The
polynomial coefficients come from applying the defining operator
A = x^2 - x d/dx x d/dx to p*e^{-x} directly, not from any closed form.

Run from the repository root:

    python3 tests/oracles/generate.py
"""

from __future__ import annotations

import math
from fractions import Fraction
from pathlib import Path

import mpmath
import numpy as np

mpmath.mp.dps = 30

OUT = Path(__file__).with_name("frozen.py")


def trapezoid(f, a, b, h):
    n = int(round((b - a) / h))
    x = np.linspace(a, b, n + 1)
    y = f(x)
    return float(((b - a) / n) * (y.sum() - 0.5 * (y[0] + y[-1])))


def simpson(f, a, b, h):
    n = int(round((b - a) / h))
    if n % 2:
        n += 1
    x = np.linspace(a, b, n + 1)
    y = f(x)
    hh = (b - a) / n
    return float(hh / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))


def besselk_imag(tau, x):
    return mpmath.besselk(1j * tau, x).real


# ---------------------------------------------------------------------------
# Polynomials p_n by the defining operator, exact Fractions.
# With d/dx(f e^{-x}) = (f' - f) e^{-x} the iteration reads
# p_{n+1} = x (g' - g) - x^2 p_n  where  g = x (p_n' - p_n),
# fixed by p_1 = -x.

def _poly_d(c):
    return [Fraction(k) * c[k] for k in range(1, len(c))] or [Fraction(0)]


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _poly_shift(c):
    # multiply by x
    return [Fraction(0)] + c


def next_poly(p):
    g = _poly_shift(_poly_sub(_poly_d(p), p))
    out = _poly_sub(_poly_shift(_poly_sub(_poly_d(g), g)), _poly_shift(_poly_shift(p)))
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def polys_upto(n):
    ps = [[Fraction(1)]]
    for _ in range(n):
        ps.append(next_poly(ps[-1]))
    return ps


def poly_val(c, x):
    acc = mpmath.mpf(0)
    for coef in reversed(c):
        acc = acc * x + mpmath.mpf(coef.numerator) / coef.denominator
    return acc


def main():
    vals = {}

    # Bessel kernel integrals at the steps the quadrature examples state.
    vals["K0_X1_SIMPSON"] = simpson(lambda u: np.exp(-np.cosh(u)), 0.0, 40.0, 1e-5)
    vals["KI1_X1_TRAP"] = trapezoid(lambda u: np.exp(-np.cosh(u)) * np.cos(u), 0.0, 40.0, 1e-5)
    vals["OSC_SINH_SIN_PI"] = trapezoid(
        lambda u: np.exp(-np.cosh(u)) * np.sinh(u) * np.sin(math.pi * u), 0.0, 30.0, 1e-5
    )

    # Direct-route density at r=1, t=1, trapezoid h=1e-5 on [0, 30].
    pref = math.sqrt(2.0 / math.pi**3) * math.exp(math.pi**2 / 2.0)
    vals["YOR_DIRECT_R1_T1_TRAP"] = pref * trapezoid(
        lambda y: np.exp(-0.5 * y * y - np.cosh(y)) * np.sinh(y) * np.sin(math.pi * y),
        0.0, 30.0, 1e-5,
    )

    # Reference kernel values straight from mpmath.
    vals["K0_X1_MP"] = float(mpmath.besselk(0, 1))
    vals["K_HALF_X2_MP"] = float(mpmath.besselk(0.5, 2))
    vals["KI1_X1_MP"] = float(besselk_imag(1, 1))
    vals["KI1_X2_MP"] = float(besselk_imag(1, 2))
    vals["KI2_X001_MP"] = float(besselk_imag(2, 0.01))
    vals["KI5_X2_MP"] = float(besselk_imag(5, 2))

    # First-kind series, 60 terms at raised precision.
    x = mpmath.mpf(2)
    s = mpmath.mpf(0)
    for k in range(60):
        s += (x / 2) ** (2 * k + 1) / (mpmath.factorial(k) * mpmath.factorial(k + 1))
    vals["I1_X2_SERIES60"] = float(s)

    # Spectral-route density anchors 2/(pi^2 r) * int e^{-t tau^2/2} tau sinh(pi tau) K_itau(r).
    def density(r, t):
        f = lambda tau: (mpmath.exp(-t * tau**2 / 2) * tau * mpmath.sinh(mpmath.pi * tau)
                         * besselk_imag(tau, r))
        # t = 0.5 still has 1e-9 relative mass beyond tau = 12.
        q = mpmath.quad(f, [0, 2, 4, 8, 12, 18])
        return float(2 / (mpmath.pi**2 * r) * q)

    vals["F_R1_T1"] = density(1, 1)
    vals["F_R1_T2"] = density(1, 2)
    vals["F_R2_T2"] = density(2, 2)
    vals["F_R1_T05"] = density(1, mpmath.mpf("0.5"))

    # Forward-transform images of simple functions.
    vals["IMAGE_CONST_TAU1"] = float(mpmath.quad(
        lambda u: mpmath.cos(u) / mpmath.cosh(u), [0, 5, 15, 40]))
    assert abs(vals["IMAGE_CONST_TAU1"] - math.pi / (2.0 * math.cosh(math.pi / 2.0))) < 1e-20
    vals["IMAGE_EXP_TAU1"] = float(mpmath.quad(
        lambda r: besselk_imag(1, r) * mpmath.exp(-r), [0, 1, 4, 15, 40]))
    assert abs(vals["IMAGE_EXP_TAU1"] - math.pi / math.sinh(math.pi)) < 1e-18

    # Heat kernel h_1(1, 2) through the spectral product.
    f = lambda tau: (mpmath.exp(-tau**2 / 2) * tau * mpmath.sinh(mpmath.pi * tau)
                     * besselk_imag(tau, 1) * besselk_imag(tau, 2))
    vals["H_T1_X1_Y2"] = float(2 / mpmath.pi**2 * mpmath.quad(f, [0, 2, 4, 8, 12]))

    # Convolution (e^{-u} * e^{-y})(1): plain nested quadrature of the
    # double integral, no change of variables.
    def inner(u):
        g = lambda y: mpmath.exp(-((u * u + y * y) / (u * y) + u * y) / 2 - y)
        return mpmath.exp(-u) * mpmath.quad(g, [0, u / 2, u, 2 * u, 8 * (u + 1)])

    vals["CONV_EXP_EXP_X1"] = float(mpmath.quad(inner, [0, 0.5, 1, 2, 4, 10, 25]) / 2)

    # Leading series coefficient a_1(r=1, t=2) written spectrally:
    # -(2/pi) int e^{-tau^2} tau^2 K_itau(1).
    vals["A1_R1_T2"] = float(-(2 / mpmath.pi) * mpmath.quad(
        lambda tau: mpmath.exp(-tau**2) * tau**2 * besselk_imag(tau, 1), [0, 2, 4, 8]))

    # Operator-generated polynomials: spot values and generating partial sums.
    ps = polys_upto(25)
    assert ps[1] == [Fraction(0), Fraction(-1)]
    assert ps[2] == [Fraction(0), Fraction(-1), Fraction(3)]
    assert ps[3] == [Fraction(0), Fraction(-1), Fraction(15), Fraction(-15)]
    vals["P3_AT_2"] = float(poly_val(ps[3], 2))
    vals["A_12_12"] = int(ps[12][12])
    vals["A_25_25"] = int(ps[25][25])

    def gen_partial(x, t, N):
        acc = mpmath.mpf(0)
        for n in range(N + 1):
            acc += poly_val(ps[n], x) * mpmath.mpf(t) ** (2 * n) / mpmath.factorial(2 * n)
        return acc

    g1 = gen_partial(1, mpmath.mpf("0.5"), 12)
    g2 = gen_partial(2, 1, 20)
    vals["GEN_X1_T05_N12"] = float(g1)
    vals["GEN_X2_T1_N20"] = float(g2)
    # The partial sums must already sit on the closed exponential.
    assert abs(g1 - mpmath.exp(-2 * 1 * mpmath.sinh(mpmath.mpf("0.25")) ** 2)) < 1e-14
    assert abs(g2 - mpmath.exp(-2 * 2 * mpmath.sinh(mpmath.mpf("0.5")) ** 2)) < 1e-10

    # Bernoulli cross-check: B_8 against the zeta route.
    b8 = -mpmath.zeta(8) * 2 * mpmath.factorial(8) / (2 * mpmath.pi) ** 8
    assert abs(b8 - Fraction(-1, 30)) < 1e-25

    lines = ['"""Values computed by generate.py; regenerate, do not edit."""', ""]
    for k, v in vals.items():
        lines.append(f"{k} = {v!r}")
    OUT.write_text("\n".join(lines) + "\n")
    for k, v in vals.items():
        print(f"{k} = {v!r}", flush=True)


if __name__ == "__main__":
    main()
