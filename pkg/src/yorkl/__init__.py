"""Numerical toolkit for Yor's integral representation of the Hartman-Watson
density, the Kontorovich-Lebedev transform machinery around it, and the
exact polynomial system tied to its heat-kernel expansion.

Layers, bottom up: ``quadrature`` (adaptive panel integration with explicit
truncation bounds), ``bessel`` (Macdonald functions of real and imaginary
order), ``polys`` (exact integer polynomial system), ``kl`` (transform pair,
convolution, heat kernel), ``yor`` (the density itself and its
cross-representations), ``cli`` (command line front end).
"""

from .quadrature import (
    CrossCheckReport,
    DEFAULT_SPEC,
    EvalResult,
    EvaluationError,
    FrequencyCapError,
    QuadratureError,
    QuadratureSpec,
    UnboundedTailError,
    integrate_damped_oscillatory,
    integrate_finite,
    integrate_log_split,
    integrate_semi_infinite,
)
from .bessel import (
    IMAG_ORDER_CAP,
    OrderTooLargeError,
    REAL_ORDER_CAP,
    bessel_i_int,
    bessel_k_imag,
    bessel_k_real,
    check_k_asymptotics,
)
from .polys import (
    BigRational,
    BoundParams,
    ConsistencyError,
    ExactPolynomial,
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
from .kl import (
    ClosedForm,
    DivergenceGuardError,
    HeatKernelPoint,
    ParameterWindowError,
    RingMembershipError,
    SampledFunction,
    TailModelError,
    TestFunction,
    exp_decay,
    factorization_check,
    heat_kernel,
    heat_kernel_translation,
    kl_convolution,
    kl_forward,
    kl_inverse,
    l_alpha_norm,
    macdonald_check,
    parseval_check,
    semigroup_check,
)
from .yor import (
    DensityPoint,
    SmallTInstabilityError,
    TruncationUnsoundError,
    derivative_bound_check,
    diffusion_residual,
    tabulate_density,
    yor_direct,
    yor_dt_derivative,
    yor_kl_image,
    yor_polyseries,
    yor_spectral,
    yor_squared_norm,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # quadrature
    "QuadratureSpec", "DEFAULT_SPEC", "EvalResult", "CrossCheckReport",
    "QuadratureError", "EvaluationError", "UnboundedTailError", "FrequencyCapError",
    "integrate_finite", "integrate_semi_infinite", "integrate_damped_oscillatory",
    "integrate_log_split",
    # bessel
    "REAL_ORDER_CAP", "IMAG_ORDER_CAP", "OrderTooLargeError",
    "bessel_k_real", "bessel_k_imag", "bessel_i_int", "check_k_asymptotics",
    # polys
    "BigRational", "ExactPolynomial", "BoundParams", "ConsistencyError",
    "InsufficientTruncationError", "poly_explicit", "poly_recurrence", "poly_eval",
    "verify_identities", "generating_check", "poly_series_bessel", "poly_bound",
    "poly_asymptotic_ratio", "bernoulli_exact", "verify_bernoulli_integral",
    "poly_kl_image",
    # kl
    "SampledFunction", "ClosedForm", "TestFunction", "HeatKernelPoint",
    "TailModelError", "DivergenceGuardError", "RingMembershipError",
    "ParameterWindowError", "exp_decay", "kl_forward", "kl_inverse",
    "parseval_check", "kl_convolution", "factorization_check", "macdonald_check",
    "heat_kernel", "heat_kernel_translation", "semigroup_check", "l_alpha_norm",
    # yor
    "DensityPoint", "SmallTInstabilityError", "TruncationUnsoundError",
    "yor_direct", "yor_spectral", "yor_kl_image", "yor_squared_norm",
    "yor_dt_derivative", "diffusion_residual", "derivative_bound_check",
    "yor_polyseries", "tabulate_density",
]
