"""Weighted trapezoidal (Fejer) inequalities for h-convex functions.

A small numerics library around one object, the weight mapping

    M(t) = int_t^1 g(s a + (1-s) b) ds - int_0^t g(s a + (1-s) b) ds,

its structural properties, and the trapezoid-gap bounds they imply when
|f'| is h-convex.  Applications cover special means, moments of bounded
random variables, and a weighted trapezoidal rule with a certified
a-priori error bound and adaptive refinement.
"""

from .applications import (
    DensitySpec,
    MeanParams,
    arithmetic_mean,
    gen_log_mean,
    lambda_moment,
    means_bound_check,
    means_corollary_bound,
    moment_bound_check,
)
from .bounds import (
    DerivativeBoundSet,
    DerivBounds,
    FejerTriple,
    LipschitzBoundSet,
    LipschitzConstant,
    bound_bounded_derivative,
    bound_convex_left,
    bound_convex_right,
    bound_h_convex,
    bound_h_convex_mirror,
    bound_lipschitz,
    bound_s_convex,
    fejer_triple,
)
from .errors import (
    ConjugateExponentError,
    DomainError,
    ExpressionSyntaxError,
    FejerQuadError,
    IntegrationDepthError,
    KernelValidationError,
    NonDensityError,
    NonIntegrableKernelError,
    NonnegativityError,
    ParameterError,
    PartitionSpanError,
    SymmetryViolationError,
    UnknownIdentifierError,
)
from .expr import Expression, evaluate, numeric_derivative, parse
from .fejer import (
    BoundReport,
    ProblemSpec,
    identity_defect,
    m_abs_integral,
    m_antisymmetry_defect,
    m_bound_holder,
    m_bound_sup,
    m_integral,
    m_sign_violation,
    m_symmetric_form,
    m_value,
    make_problem,
    mirrored_identity_defect,
    trapezoid_gap,
)
from .hconvexity import ConvexityReport, Violation, check_h_convex
from .integrate import (
    DEFAULT_SETTINGS,
    QuadratureSettings,
    integrate,
    q_norm,
    sup_norm,
    support_breakpoints,
)
from .kernel import (
    HKernel,
    half_interval_kernel_integral,
    kernel_sum_cumulative,
    kernel_value,
)
from .quadrature import (
    Partition,
    QuadResult,
    RefineResult,
    adaptive_refine,
    error_bound_h,
    error_bound_power,
    local_error_terms,
    run_quadrature,
    subinterval_symmetry_warnings,
    trapezoid_weighted,
    uniform_partition,
)

__version__ = "0.1.0"
