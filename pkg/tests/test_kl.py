"""Transform layer: forward and inverse maps, Parseval, kernels, convolution."""

import math

import numpy as np
import pytest
from scipy.interpolate import CubicSpline

import frozen
from yorkl.kl import (
    ClosedForm,
    DivergenceGuardError,
    RingMembershipError,
    SampledFunction,
    TailModelError,
    exp_decay,
    factorization_check,
    heat_kernel,
    heat_kernel_translation,
    kl_convolution,
    kl_forward,
    kl_forward_many,
    kl_inverse,
    l_alpha_norm,
    macdonald_check,
    parseval_check,
    semigroup_check,
)
from yorkl.quadrature import QuadratureSpec
from yorkl.yor import tabulate_density

SPEC = QuadratureSpec(truncation_log_decades=16.0)
# Checks with a 1e-4 tolerance keep a wide margin even on a light budget.
LOOSE = QuadratureSpec(rel_tol=1e-7, abs_tol=1e-11, truncation_log_decades=12.0)


def const_one() -> ClosedForm:
    return ClosedForm(
        fn=lambda xs: np.ones_like(xs),
        damping=lambda u: 0.0,
        small_x_power=0.0,
        bound_near_zero=1.0,
        label="1",
    )


def test_forward_images_of_reference_functions():
    assert kl_forward(exp_decay(), 1.0, SPEC) == pytest.approx(frozen.IMAGE_EXP_TAU1, rel=1e-10)
    assert kl_forward(const_one(), 1.0, SPEC) == pytest.approx(frozen.IMAGE_CONST_TAU1, rel=1e-10)
    assert kl_forward(const_one(), 1.0, SPEC) == pytest.approx(
        math.pi / (2.0 * math.cosh(math.pi / 2.0)), rel=1e-10
    )


def test_forward_image_of_the_density_is_gaussian():
    dens = tabulate_density(1.0, SPEC)
    assert kl_forward(dens, 1.0, SPEC) == pytest.approx(math.exp(-0.5), rel=1e-6)


def test_forward_many_matches_scalar():
    taus = np.array([0.3, 1.0, 2.5])
    many = kl_forward_many(exp_decay(), taus, SPEC)
    for tau, v in zip(taus, many):
        assert v == pytest.approx(kl_forward(exp_decay(), float(tau), SPEC), rel=1e-12)


def test_inverse_of_gaussian_image_recovers_the_density():
    v = kl_inverse(
        lambda ts: np.exp(-0.5 * np.asarray(ts) ** 2),
        1.0,
        SPEC,
        g_damping=lambda u: 0.5 * u * u,
    )
    assert v == pytest.approx(frozen.F_R1_T1, rel=1e-10)


def test_inverse_of_closed_form_image_recovers_neg_exp():
    def g(ts):
        ts = np.asarray(ts, dtype=float)
        out = np.full_like(ts, -math.pi)
        nz = ts > 0
        out[nz] = -math.pi * ts[nz] / np.sinh(math.pi * ts[nz])
        return out

    v = kl_inverse(
        g, 1.0, SPEC, g_damping=lambda u: math.pi * u - math.log(2.1 * math.pi * u + 2.1)
    )
    assert v == pytest.approx(-math.exp(-1.0), rel=1e-10)


@pytest.fixture(scope="module")
def exp_image_spline():
    # One tabulation feeds all roundtrip points.  The clamp at 14 discards
    # image values that sinh(pi tau) could no longer amplify into the budget.
    taus = np.linspace(0.0, 14.0, 561)
    img = kl_forward_many(exp_decay(), taus, SPEC)
    return CubicSpline(taus, img)


def test_forward_then_inverse_roundtrip(exp_image_spline):
    def g(ts):
        ts = np.asarray(ts, dtype=float)
        return np.where(ts <= 14.0, exp_image_spline(np.clip(ts, 0.0, 14.0)), 0.0)

    damp = lambda u: math.pi * u - math.log(2.1 * math.pi * u + 2.1)
    for r in (0.5, 1.0, 2.0):
        v = kl_inverse(g, r, SPEC, g_damping=damp)
        assert v == pytest.approx(math.exp(-r), rel=1e-6)


def test_parseval_for_exp():
    rep = parseval_check(exp_decay(), SPEC)
    assert rep.passed
    assert rep.rel_diff <= 1e-5


def test_parseval_for_densities():
    rep = parseval_check(tabulate_density(1.0, SPEC), SPEC)
    assert rep.passed
    # Weighted squared norm of F_1: (pi^2/4) e^{pi^2/4} / sqrt(pi).
    anchor = math.pi**2 / 4.0 * math.exp(math.pi**2 / 4.0) / math.sqrt(math.pi)
    assert rep.rhs == pytest.approx(anchor, rel=1e-6)
    rep = parseval_check(tabulate_density(2.0, SPEC), SPEC)
    assert rep.passed
    anchor = math.pi**2 * math.exp(math.pi**2 / 8.0) / (8.0 * math.sqrt(2.0 * math.pi))
    assert rep.rhs == pytest.approx(anchor, rel=1e-6)


def test_convolution_reference_value_and_symmetry():
    assert kl_convolution(exp_decay(), exp_decay(), 1.0, SPEC) == pytest.approx(
        frozen.CONV_EXP_EXP_X1, rel=1e-9
    )
    dens = tabulate_density(1.0, SPEC)
    a = kl_convolution(exp_decay(), dens, 1.0, SPEC)
    b = kl_convolution(dens, exp_decay(), 1.0, SPEC)
    assert a == pytest.approx(b, rel=1e-9)


def test_convolution_of_densities_adds_the_time_parameter():
    dens = tabulate_density(1.0, SPEC)
    v = kl_convolution(dens, dens, 1.0, SPEC)
    assert v == pytest.approx(frozen.F_R1_T2, rel=1e-5)


def test_factorization_property():
    rep = factorization_check(exp_decay(), exp_decay(), 1.0, LOOSE)
    assert rep.passed
    dens_half = tabulate_density(0.5, LOOSE)
    rep = factorization_check(dens_half, dens_half, 1.0, LOOSE)
    assert rep.passed
    assert rep.rhs == pytest.approx(math.exp(-0.5), rel=1e-6)
    rep = factorization_check(exp_decay(), tabulate_density(1.0, LOOSE), 0.5, LOOSE)
    assert rep.passed


def test_macdonald_product_formula():
    rep = macdonald_check(0.0, 1.0, 1.0, SPEC)
    assert rep.passed
    assert rep.lhs == pytest.approx(frozen.K0_X1_MP**2, rel=1e-11)
    rep = macdonald_check(1.0, 1.0, 2.0, SPEC)
    assert rep.passed
    assert rep.lhs == pytest.approx(frozen.KI1_X1_MP * frozen.KI1_X2_MP, rel=1e-11)


def test_heat_kernel_point_and_symmetry():
    pt = heat_kernel(1.0, 1.0, 2.0, SPEC)
    assert pt.value == pytest.approx(frozen.H_T1_X1_Y2, rel=1e-10)
    # x h_t(x, y) is symmetric in (x, y).
    a = 1.0 * heat_kernel(1.0, 1.0, 2.0, SPEC).value
    b = 2.0 * heat_kernel(1.0, 2.0, 1.0, SPEC).value
    assert a == pytest.approx(b, rel=1e-10)
    assert heat_kernel(1.0, 1.0, 1.0, SPEC).value > 0.0


def test_heat_kernel_translation_route_agrees():
    spectral = heat_kernel(1.0, 1.0, 2.0, SPEC).value
    translated = heat_kernel_translation(1.0, 1.0, 2.0, SPEC)
    assert translated == pytest.approx(spectral, rel=1e-6)


def test_semigroup_property():
    rep = semigroup_check(1.0, 1.0, 1.0, SPEC)
    assert rep.passed
    assert rep.rhs == pytest.approx(frozen.F_R1_T2, rel=1e-10)
    rep = semigroup_check(0.5, 1.5, 2.0, SPEC)
    assert rep.passed
    assert rep.rhs == pytest.approx(frozen.F_R2_T2, rel=1e-10)


def test_semigroup_split_order_is_immaterial():
    a = semigroup_check(1.0, 1.0, 1.0, SPEC).lhs
    b = semigroup_check(1.5, 0.5, 1.0, SPEC).lhs
    assert a == pytest.approx(b, rel=2e-4)


def test_weighted_norms():
    v = l_alpha_norm(exp_decay(), 0.0, SPEC)
    assert math.isfinite(v) and v > 0.0
    assert l_alpha_norm(exp_decay(), 0.7, SPEC) == pytest.approx(
        l_alpha_norm(exp_decay(), -0.7, SPEC), rel=1e-9
    )
    vf = l_alpha_norm(tabulate_density(1.0, SPEC), 0.0, SPEC)
    assert math.isfinite(vf) and vf > 0.0


def test_inverse_guards_against_slow_image_decay():
    # tau*sinh(pi*tau) eats anything slower than e^{-pi tau/2}.
    with pytest.raises(DivergenceGuardError):
        kl_inverse(
            lambda ts: np.exp(-np.asarray(ts, dtype=float)),
            1.0,
            SPEC,
            g_damping=lambda u: u,
        )


def test_ring_membership_guard():
    diverging = ClosedForm(
        fn=lambda xs: np.asarray(xs, dtype=float) ** -1.5,
        damping=lambda u: u,
        small_x_power=-1.5,
        bound_near_zero=1.0,
        label="x^-1.5",
    )
    with pytest.raises(RingMembershipError):
        kl_forward(diverging, 1.0, SPEC)


def test_declared_tail_must_match_samples():
    grid = np.linspace(1.0, 30.0, 100)
    lorentz = SampledFunction(
        grid=grid,
        values=1.0 / (1.0 + grid**2),
        tail_model="exponential",
        tail_rate=5.0,
        label="lorentzian",
    )
    with pytest.raises(TailModelError):
        kl_forward(lorentz, 1.0, SPEC)
