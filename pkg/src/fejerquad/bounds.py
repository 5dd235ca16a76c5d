"""Right-hand-side bounds on the trapezoid gap and their verdicts.

``bound_h_convex`` evaluates the main estimate

    |gap| <= (b-a) (|f'(a)|+|f'(b)|) * int_a^mid g(x) S((x-a)/(b-a)) dx

for |f'| h-convex and symmetric nonnegative g, with
S(u) = int_0^u [h(t)+h(1-t)] dt.  The mirrored, s-convex and convex
variants expand the same formula; the bounded-derivative and Lipschitz
estimates control the gap through integrals of M instead.  Hypothesis
checks (h-convexity of |f'|, derivative range, Lipschitz continuity)
attach warnings to the report rather than failing: the bound value is
well defined either way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SymmetryViolationError
from .fejer import (
    BoundReport,
    ProblemSpec,
    _INNER_FACTOR,
    holder_weight_integral,
    m_abs_integral,
    m_integral,
    m_value,
    trapezoid_gap,
)
from .hconvexity import check_h_convex
from .integrate import DEFAULT_SETTINGS, QuadratureSettings, integrate, q_norm, sup_norm
from .kernel import HKernel, kernel_sum_fn

__all__ = [
    "DerivBounds",
    "LipschitzConstant",
    "FejerTriple",
    "DerivativeBoundSet",
    "LipschitzBoundSet",
    "fejer_triple",
    "bound_h_convex",
    "bound_h_convex_mirror",
    "bound_s_convex",
    "bound_convex_left",
    "bound_convex_right",
    "bound_bounded_derivative",
    "bound_lipschitz",
]

_HYPOTHESIS_GRID = 9  # coarse falsifier grid for warnings inside bound calls


@dataclass(frozen=True)
class DerivBounds:
    """Constants m_lo <= f'(x) <= m_hi on [a, b]."""

    m_lo: float
    m_hi: float

    def __post_init__(self):
        if not self.m_lo < self.m_hi:
            raise ParameterError(
                f"need m_lo < m_hi, got {self.m_lo!r} and {self.m_hi!r}"
            )


@dataclass(frozen=True)
class LipschitzConstant:
    K: float

    def __post_init__(self):
        if not self.K > 0.0:
            raise ParameterError(f"Lipschitz constant must be positive, got {self.K!r}")


@dataclass(frozen=True)
class FejerTriple:
    """The three members of f(mid)*int(g) <= int(fg) <= trapezoid value."""

    lhs: float
    mid: float
    rhs: float
    left_satisfied: bool
    right_satisfied: bool
    report_tol: float

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "mid": self.mid,
            "rhs": self.rhs,
            "left_satisfied": self.left_satisfied,
            "right_satisfied": self.right_satisfied,
            "report_tol": self.report_tol,
        }


@dataclass(frozen=True)
class DerivativeBoundSet:
    primary: BoundReport
    sup_form: BoundReport
    holder_form: BoundReport

    def reports(self) -> tuple:
        return (self.primary, self.sup_form, self.holder_form)


@dataclass(frozen=True)
class LipschitzBoundSet:
    primary: BoundReport
    sup_form: BoundReport

    def reports(self) -> tuple:
        return (self.primary, self.sup_form)


def fejer_triple(
    p: ProblemSpec, settings: QuadratureSettings | None = None
) -> FejerTriple:
    """Evaluate both sides of the weighted midpoint/trapezoid sandwich.

    Meaningful as an inequality only for convex f with g symmetric and
    nonnegative; the values are returned either way.
    """
    bps = p.g_breakpoints
    total_g = integrate(p.g, p.a, p.b, settings, breakpoints=bps)
    mid = integrate(lambda x: p.f(x) * p.g(x), p.a, p.b, settings, breakpoints=bps)
    lhs = p.f(p.midpoint) * total_g
    rhs = 0.5 * (p.f(p.a) + p.f(p.b)) * total_g
    tol = 1e-8 * (1.0 + max(abs(lhs), abs(mid), abs(rhs)))
    return FejerTriple(
        lhs=lhs,
        mid=mid,
        rhs=rhs,
        left_satisfied=mid - lhs >= -tol,
        right_satisfied=rhs - mid >= -tol,
        report_tol=tol,
    )


def _require_symmetric(p: ProblemSpec):
    if not p.g_symmetric:
        raise SymmetryViolationError("this bound requires a symmetric weight")


def _hypothesis_warnings(
    p: ProblemSpec, h: HKernel | None, check: bool
) -> list:
    warnings = []
    if not p.g_nonnegative:
        warnings.append("weight is not nonnegative on the validation grid")
    if check and h is not None:
        report = check_h_convex(
            lambda x: abs(p.fprime_value(x)), h, p.a, p.b, grid=_HYPOTHESIS_GRID
        )
        if report.refuted:
            warnings.append(
                f"|f'| not verified {h.describe()}-convex: "
                f"{len(report.violations)} grid violations, "
                f"worst {report.max_violation:.3e}"
            )
    return warnings


def _endpoint_slopes(p: ProblemSpec) -> float:
    return abs(p.fprime_value(p.a)) + abs(p.fprime_value(p.b))


def bound_h_convex(
    p: ProblemSpec,
    h: HKernel,
    settings: QuadratureSettings | None = None,
    check_hypotheses: bool = True,
) -> BoundReport:
    """Trapezoid-gap bound for |f'| h-convex, integrated over the left half."""
    _require_symmetric(p)
    base = settings or DEFAULT_SETTINGS
    s_fn = kernel_sum_fn(h, base.scaled(_INNER_FACTOR))
    a, width = p.a, p.width
    outer = integrate(
        lambda x: p.g(x) * s_fn((x - a) / width),
        p.a,
        p.midpoint,
        base,
        breakpoints=p.g_breakpoints,
    )
    bound = width * _endpoint_slopes(p) * outer
    measured = abs(trapezoid_gap(p, base))
    warnings = _hypothesis_warnings(p, h, check_hypotheses)
    return BoundReport.make(
        f"h_convex_bound_{h.describe()}", measured, bound, warnings=tuple(warnings)
    )


def bound_h_convex_mirror(
    p: ProblemSpec,
    h: HKernel,
    settings: QuadratureSettings | None = None,
    check_hypotheses: bool = True,
) -> BoundReport:
    """Same bound integrated over the right half; equals the direct form
    for symmetric weights."""
    _require_symmetric(p)
    base = settings or DEFAULT_SETTINGS
    s_fn = kernel_sum_fn(h, base.scaled(_INNER_FACTOR))
    b, width = p.b, p.width
    outer = integrate(
        lambda x: p.g(x) * s_fn((b - x) / width),
        p.midpoint,
        p.b,
        base,
        breakpoints=p.g_breakpoints,
    )
    bound = width * _endpoint_slopes(p) * outer
    measured = abs(trapezoid_gap(p, base))
    warnings = _hypothesis_warnings(p, h, check_hypotheses)
    return BoundReport.make(
        f"h_convex_mirror_bound_{h.describe()}",
        measured,
        bound,
        warnings=tuple(warnings),
    )


def bound_s_convex(
    p: ProblemSpec,
    s: float,
    settings: QuadratureSettings | None = None,
    check_hypotheses: bool = True,
) -> BoundReport:
    """Expanded form of the bound for |f'| s-convex (kernel t^s, 0 < s <= 1)."""
    if not 0.0 < s <= 1.0:
        raise ParameterError(f"s must lie in (0, 1], got {s!r}")
    _require_symmetric(p)
    base = settings or DEFAULT_SETTINGS
    a, b, width = p.a, p.b, p.width
    sp1 = 1.0 + s

    def bracket(x: float) -> float:
        u = (x - a) / width
        v = (b - x) / width
        return u**sp1 - v**sp1 + 1.0

    outer = integrate(
        lambda x: p.g(x) * bracket(x), a, p.midpoint, base, breakpoints=p.g_breakpoints
    )
    bound = width / sp1 * _endpoint_slopes(p) * outer
    measured = abs(trapezoid_gap(p, base))
    warnings = _hypothesis_warnings(p, HKernel.power(s), check_hypotheses)
    return BoundReport.make(
        f"s_convex_bound_s{s:g}", measured, bound, warnings=tuple(warnings)
    )


def _bound_convex(
    p: ProblemSpec,
    left: bool,
    settings: QuadratureSettings | None,
    check_hypotheses: bool,
) -> BoundReport:
    _require_symmetric(p)
    base = settings or DEFAULT_SETTINGS
    if left:
        outer = integrate(
            lambda x: p.g(x) * (x - p.a),
            p.a,
            p.midpoint,
            base,
            breakpoints=p.g_breakpoints,
        )
        label = "convex_bound_left"
    else:
        outer = integrate(
            lambda x: p.g(x) * (p.b - x),
            p.midpoint,
            p.b,
            base,
            breakpoints=p.g_breakpoints,
        )
        label = "convex_bound_right"
    bound = _endpoint_slopes(p) * outer
    measured = abs(trapezoid_gap(p, base))
    warnings = _hypothesis_warnings(p, HKernel.power(1.0), check_hypotheses)
    return BoundReport.make(label, measured, bound, warnings=tuple(warnings))


def bound_convex_left(
    p: ProblemSpec,
    settings: QuadratureSettings | None = None,
    check_hypotheses: bool = True,
) -> BoundReport:
    """Convex-case bound (|f'(a)|+|f'(b)|) * int_a^mid g(x)(x-a) dx.

    For g identically 1 this equals (b-a)^2 (|f'(a)|+|f'(b)|) / 8.
    """
    return _bound_convex(p, True, settings, check_hypotheses)


def bound_convex_right(
    p: ProblemSpec,
    settings: QuadratureSettings | None = None,
    check_hypotheses: bool = True,
) -> BoundReport:
    """Right-half companion of :func:`bound_convex_left`."""
    return _bound_convex(p, False, settings, check_hypotheses)


def bound_bounded_derivative(
    p: ProblemSpec,
    d: DerivBounds,
    exponents: tuple = (2.0, 2.0),
    settings: QuadratureSettings | None = None,
    grid: int = 101,
) -> DerivativeBoundSet:
    """Gap estimate from two-sided derivative bounds m_lo <= f' <= m_hi.

    The measured quantity is |gap/(b-a) - (m_lo+m_hi)/4 * int M|; the
    offset integral vanishes for symmetric weights.  Alongside the primary
    bound (M-m)(b-a)/4 * int|M| the sup-norm and Holder simplifications
    are reported.
    """
    base = settings or DEFAULT_SETTINGS
    warnings = []
    fp = [p.fprime_value(x) for x in np.linspace(p.a, p.b, grid)]
    tol = 1e-9 * (1.0 + max(abs(v) for v in fp))
    if min(fp) < d.m_lo - tol or max(fp) > d.m_hi + tol:
        warnings.append(
            f"derivative leaves [{d.m_lo!r}, {d.m_hi!r}] on the grid: "
            f"range [{min(fp)!r}, {max(fp)!r}]"
        )

    gap_norm = trapezoid_gap(p, base) / p.width
    offset = 0.25 * (d.m_lo + d.m_hi) * m_integral(p, base)
    measured = abs(gap_norm - offset)
    spread = d.m_hi - d.m_lo
    abs_m = m_abs_integral(p, base)
    p_exp, q_exp = exponents
    primary = BoundReport.make(
        "bounded_derivative_bound",
        measured,
        0.25 * spread * p.width * abs_m,
        warnings=tuple(warnings),
    )
    sup_form = BoundReport.make(
        "bounded_derivative_sup_bound",
        measured,
        0.125 * spread * p.width * sup_norm(p.g, p.a, p.b),
        warnings=tuple(warnings),
    )
    holder_form = BoundReport.make(
        f"bounded_derivative_holder_bound_p{p_exp:g}",
        measured,
        0.5
        * spread
        * p.width
        * q_norm(p.g_param, q_exp, base, breakpoints=p.g_breakpoints_s)
        * holder_weight_integral(p_exp),
        warnings=tuple(warnings),
    )
    return DerivativeBoundSet(primary=primary, sup_form=sup_form, holder_form=holder_form)


def bound_lipschitz(
    p: ProblemSpec,
    L: LipschitzConstant,
    settings: QuadratureSettings | None = None,
    spot_checks: int = 64,
) -> LipschitzBoundSet:
    """Gap estimate for f' Lipschitz with constant K.

    Measured: |gap/(b-a) - f'(mid)/2 * int M|.  Primary bound:
    K(b-a)/2 * int |t-1/2| |M(t)| dt, simplified to K(b-a)||g||_inf / 12.
    """
    base = settings or DEFAULT_SETTINGS
    inner = base.scaled(_INNER_FACTOR)
    warnings = []
    rng = np.random.default_rng(0)
    pts = rng.uniform(p.a, p.b, size=(spot_checks, 2))
    for x, y in pts:
        dv = abs(p.fprime_value(x) - p.fprime_value(y))
        if dv > L.K * abs(x - y) * (1.0 + 1e-9) + 1e-12:
            warnings.append(
                f"Lipschitz condition violated: |f'({x!r}) - f'({y!r})| = {dv!r}"
            )
            break

    gap_norm = trapezoid_gap(p, base) / p.width
    offset = 0.5 * p.fprime_value(p.midpoint) * m_integral(p, base)
    measured = abs(gap_norm - offset)

    def integrand(t: float) -> float:
        return abs(t - 0.5) * abs(m_value(p, t, inner))

    weighted = integrate(integrand, 0.0, 0.5, base) + integrate(
        integrand, 0.5, 1.0, base
    )
    primary = BoundReport.make(
        "lipschitz_bound",
        measured,
        0.5 * L.K * p.width * weighted,
        warnings=tuple(warnings),
    )
    sup_form = BoundReport.make(
        "lipschitz_sup_bound",
        measured,
        L.K * p.width * sup_norm(p.g, p.a, p.b) / 12.0,
        warnings=tuple(warnings),
    )
    return LipschitzBoundSet(primary=primary, sup_form=sup_form)
