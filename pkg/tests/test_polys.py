"""Exact polynomial family: closed form, recurrence, identities, bounds."""

import math
from fractions import Fraction

import pytest

import frozen
from yorkl.polys import (
    BoundParams,
    InsufficientTruncationError,
    bernoulli_exact,
    generating_check,
    poly_asymptotic_ratio,
    poly_bound,
    poly_eval,
    poly_explicit,
    poly_kl_image,
    poly_recurrence,
    poly_series_bessel,
    verify_bernoulli_integral,
    verify_identities,
)
from yorkl.quadrature import QuadratureSpec

SPEC = QuadratureSpec(truncation_log_decades=16.0)


def test_first_polynomials_have_the_stated_coefficients():
    assert list(poly_explicit(0).coeffs) == [1]
    assert list(poly_explicit(1).coeffs) == [0, -1]
    assert list(poly_explicit(2).coeffs) == [0, -1, 3]
    assert list(poly_explicit(3).coeffs) == [0, -1, 15, -15]
    assert poly_explicit(4).coeffs[-1] == 105


def test_point_values():
    assert poly_eval(poly_explicit(1), 5.0) == -5.0
    assert poly_eval(poly_explicit(3), 2.0) == frozen.P3_AT_2
    for n in range(1, 9):
        assert poly_eval(poly_explicit(n), 0.0) == 0.0


def test_leading_coefficients_are_signed_double_factorials():
    for n in range(0, 31):
        dfact = math.prod(range(1, 2 * n, 2))
        assert poly_explicit(n).coeffs[-1] == (-1) ** n * dfact
    assert poly_explicit(12).coeffs[-1] == frozen.A_12_12
    assert poly_recurrence(25).coeffs[-1] == frozen.A_25_25


def test_explicit_and_recurrence_agree_exactly():
    for n in range(0, 16):
        assert list(poly_explicit(n).coeffs) == list(poly_recurrence(n).coeffs)


def test_coefficient_identities_hold_with_zero_tolerance():
    rep = verify_identities(20)
    assert rep.passed
    assert rep.abs_diff == 0


def test_generating_function_partial_sums():
    rep = generating_check(1.0, 0.5, 12)
    assert rep.lhs == pytest.approx(frozen.GEN_X1_T05_N12, rel=1e-13)
    assert rep.rhs == pytest.approx(math.exp(-2.0 * math.sinh(0.25) ** 2), rel=1e-14)
    assert rep.rel_diff <= 1e-10
    rep = generating_check(2.0, 1.0, 20)
    assert rep.lhs == pytest.approx(frozen.GEN_X2_T1_N20, rel=1e-13)
    assert rep.rel_diff <= 1e-8


def test_generating_function_guards():
    # Convergence of the partial-sum bound needs 2|t| inside the radius.
    with pytest.raises(ValueError):
        generating_check(1.0, 1.2, 12)
    # (2N)! overflows double precision past N = 60.
    with pytest.raises(ValueError):
        generating_check(1.0, 0.5, 61)


def test_alternating_bessel_series_reaches_the_polynomials():
    assert poly_series_bessel(1, 0.1, 30) == pytest.approx(
        poly_eval(poly_explicit(1), 0.1), rel=1e-8
    )
    assert poly_series_bessel(2, 1.0, 40) == pytest.approx(
        poly_eval(poly_explicit(2), 1.0), rel=1e-8
    )
    assert poly_series_bessel(3, 2.0, 60) == pytest.approx(frozen.P3_AT_2, rel=1e-8)


def test_series_truncated_before_its_term_peak_is_refused():
    # Terms m^{2n} I_m(x) grow until m ~ 2n; stopping earlier is unsound.
    with pytest.raises(InsufficientTruncationError):
        poly_series_bessel(6, 1.0, 8)


def test_bound_parameter_window():
    assert BoundParams.alpha_max(1.0) == pytest.approx(2.0 * math.pi / 3.0, rel=1e-12)
    assert BoundParams.alpha_max(0.5) == pytest.approx(math.pi / 2.0, rel=1e-12)
    with pytest.raises(ValueError):
        BoundParams(0.1, 1.0)
    with pytest.raises(ValueError):
        BoundParams(1.0, 2.2)


def test_bound_dominates_the_polynomial():
    cases = [
        (1, 1.0, BoundParams(1.0, 2.0)),
        (5, 3.0, BoundParams(0.5, BoundParams.alpha_max(0.5))),
        (8, 0.1, BoundParams(1.0, BoundParams.alpha_max(1.0))),
    ]
    for n, x, params in cases:
        assert poly_bound(n, x, params) >= abs(poly_eval(poly_explicit(n), x))


def test_asymptotic_ratio_is_finite_but_not_settled():
    # The candidate main term keeps a finite nonzero ratio to p_n at beta=1.5
    # without approaching 1 over the accessible range; the ratio study in the
    # acceptance report records the trend.
    r = poly_asymptotic_ratio(5, 1.0, 1.5)
    assert math.isfinite(r) and r != 0.0


def test_bernoulli_values_are_exact():
    assert bernoulli_exact(2) == Fraction(1, 6)
    assert bernoulli_exact(4) == Fraction(-1, 30)
    assert bernoulli_exact(8) == Fraction(-1, 30)


def test_bernoulli_moment_integrals():
    rep = verify_bernoulli_integral(1, SPEC)
    assert rep.rhs == pytest.approx(math.pi**4 / 8.0, rel=1e-12)
    assert rep.passed
    assert verify_bernoulli_integral(2, SPEC).passed
    assert verify_bernoulli_integral(3, SPEC).passed


def test_polynomial_transform_images():
    # int_0^inf e^{-u} p_n(u) K_{i tau}(u) du/u = (-1)^n pi tau^{2n-1}/sinh(pi tau).
    rep = poly_kl_image(1, 1.0, SPEC)
    assert rep.rhs == pytest.approx(-frozen.IMAGE_EXP_TAU1, rel=1e-12)
    assert rep.passed
    rep = poly_kl_image(2, 0.5, SPEC)
    assert rep.rhs == pytest.approx(math.pi * 0.5**3 / math.sinh(math.pi / 2.0), rel=1e-12)
    assert rep.passed
    rep = poly_kl_image(3, 2.0, SPEC)
    assert rep.rel_diff <= 1e-6
