"""The weight mapping M(t) and the integral identities built on it.

For a weight g on [a, b], parametrized as G(s) = g(s*a + (1-s)*b),

    M(t) = integral of G over [t, 1] - integral of G over [0, t].

When g is symmetric about the midpoint, M collapses to a one-sided
integral, is antisymmetric about t = 1/2, and is signed (nonnegative on
the left half, nonpositive on the right for nonnegative g).  The
trapezoid gap

    G_trap = (f(a)+f(b))/2 * int(g) - int(f*g)

satisfies the identity G_trap = (b-a)^2/2 * int_0^1 M(t) f'(ta+(1-t)b) dt,
which all bounds in :mod:`fejerquad.bounds` estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    ConjugateExponentError,
    NonnegativityError,
    SymmetryViolationError,
)
from .expr import Expression, numeric_derivative, parse
from .integrate import (
    DEFAULT_SETTINGS,
    QuadratureSettings,
    integrate,
    q_norm,
    sup_norm,
    support_breakpoints,
)

__all__ = [
    "ProblemSpec",
    "BoundReport",
    "make_problem",
    "m_value",
    "m_symmetric_form",
    "m_antisymmetry_defect",
    "m_sign_violation",
    "m_abs_integral",
    "m_integral",
    "m_bound_sup",
    "m_bound_holder",
    "trapezoid_gap",
    "identity_defect",
    "mirrored_identity_defect",
]

# Inner integrals of nested quadratures run this much tighter than the
# requested settings so the outer adaptive pass does not chase their noise.
_INNER_FACTOR = 1e-2

_VALIDATION_GRID = 501


@dataclass(frozen=True)
class ProblemSpec:
    """A validated (f, f', g, [a, b]) bundle.

    ``fprime`` may be None, selecting a central-difference derivative.
    ``g_symmetric`` and ``g_nonnegative`` record what the validation grid
    established about the weight; operations that require either property
    check these flags.  ``g_breakpoints`` holds detected support edges of
    the weight (x domain) and ``g_breakpoints_s`` their images in the
    normalized parametrization; integrals of the weight split there.
    """

    f: Expression
    fprime: Expression | None
    g: Expression
    a: float
    b: float
    g_symmetric: bool
    g_nonnegative: bool
    g_breakpoints: tuple = ()
    g_breakpoints_s: tuple = ()

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def g_param(self, s: float) -> float:
        """The weight in the normalized parametrization on [0, 1]."""
        return self.g(s * self.a + (1.0 - s) * self.b)

    def fprime_value(self, x: float) -> float:
        if self.fprime is not None:
            return self.fprime(x)
        return numeric_derivative(self.f, x)


def _as_expression(e: Expression | str) -> Expression:
    return parse(e) if isinstance(e, str) else e


def make_problem(
    f: Expression | str,
    fprime: Expression | str | None,
    g: Expression | str,
    a: float,
    b: float,
    *,
    g_symmetric: bool | None = None,
    g_nonnegative: bool | None = None,
    grid: int = _VALIDATION_GRID,
) -> ProblemSpec:
    """Validate and freeze a problem.

    With ``g_symmetric``/``g_nonnegative`` left as None the properties are
    detected on a uniform grid; passing True insists on them and raises
    when the grid check fails.
    """
    f = _as_expression(f)
    g = _as_expression(g)
    if fprime is not None:
        fprime = _as_expression(fprime)
    a = float(a)
    b = float(b)
    if not a < b:
        raise ValueError(f"need a < b, got a={a!r}, b={b!r}")

    xs = np.linspace(a, b, grid)
    gv = np.array([g(x) for x in xs])
    gr = np.array([g(a + b - x) for x in xs])
    sup = float(np.max(np.abs(gv)))
    symmetry_tol = 1e-9 * (1.0 + sup)
    symmetry_defect = float(np.max(np.abs(gv - gr)))
    detected_symmetric = symmetry_defect <= symmetry_tol
    detected_nonnegative = bool(np.min(gv) >= -1e-12)

    if g_symmetric is None:
        g_symmetric = detected_symmetric
    elif g_symmetric and not detected_symmetric:
        raise SymmetryViolationError(
            f"weight declared symmetric but grid defect is {symmetry_defect:.3e} "
            f"(tolerance {symmetry_tol:.3e})"
        )
    if g_nonnegative is None:
        g_nonnegative = detected_nonnegative
    elif g_nonnegative and not detected_nonnegative:
        raise NonnegativityError(
            f"weight declared nonnegative but grid minimum is {float(np.min(gv))!r}"
        )

    edges = support_breakpoints(g, a, b)
    edges_s = tuple(sorted((b - x) / (b - a) for x in edges))

    return ProblemSpec(
        f=f,
        fprime=fprime,
        g=g,
        a=a,
        b=b,
        g_symmetric=bool(g_symmetric),
        g_nonnegative=bool(g_nonnegative),
        g_breakpoints=edges,
        g_breakpoints_s=edges_s,
    )


@dataclass(frozen=True)
class BoundReport:
    """One inequality check: measured left side against a computed bound."""

    label: str
    measured: float
    bound: float
    slack: float
    satisfied: bool
    report_tol: float
    warnings: tuple = ()

    @staticmethod
    def make(
        label: str,
        measured: float,
        bound: float,
        report_tol: float | None = None,
        warnings: tuple = (),
    ) -> "BoundReport":
        if report_tol is None:
            report_tol = 1e-8 * (1.0 + abs(bound))
        slack = bound - measured
        return BoundReport(
            label=label,
            measured=measured,
            bound=bound,
            slack=slack,
            satisfied=slack >= -report_tol,
            report_tol=report_tol,
            warnings=tuple(warnings),
        )

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "measured": self.measured,
            "bound": self.bound,
            "slack": self.slack,
            "satisfied": self.satisfied,
            "report_tol": self.report_tol,
            "warnings": list(self.warnings),
        }


# ---------------------------------------------------------------------------
# The mapping M


def _check_t(t: float) -> float:
    if not -1e-12 <= t <= 1.0 + 1e-12:
        raise ValueError(f"t must lie in [0, 1], got {t!r}")
    return min(max(t, 0.0), 1.0)


def m_value(
    p: ProblemSpec, t: float, settings: QuadratureSettings | None = None
) -> float:
    """M(t) from its defining difference of integrals."""
    t = _check_t(t)
    bps = p.g_breakpoints_s
    return integrate(p.g_param, t, 1.0, settings, breakpoints=bps) - integrate(
        p.g_param, 0.0, t, settings, breakpoints=bps
    )


def m_symmetric_form(
    p: ProblemSpec, t: float, settings: QuadratureSettings | None = None
) -> float:
    """One-sided form of M, valid for weights symmetric about the midpoint."""
    if not p.g_symmetric:
        raise SymmetryViolationError("m_symmetric_form requires a symmetric weight")
    t = _check_t(t)
    bps = p.g_breakpoints_s
    if t <= 0.5:
        return 2.0 * integrate(p.g_param, t, 0.5, settings, breakpoints=bps)
    return -2.0 * integrate(p.g_param, 0.5, t, settings, breakpoints=bps)


def m_antisymmetry_defect(
    p: ProblemSpec, grid: int = 101, settings: QuadratureSettings | None = None
) -> float:
    """max over grid t of |M(t) + M(1-t)|.

    Zero (up to quadrature error) for symmetric weights; reported without
    any assertion for general weights.
    """
    if grid < 2:
        raise ValueError("grid must be at least 2")
    worst = 0.0
    for i in range(grid):
        t = i / (grid - 1)
        defect = abs(m_value(p, t, settings) + m_value(p, 1.0 - t, settings))
        if defect > worst:
            worst = defect
    return worst


def m_sign_violation(
    p: ProblemSpec, grid: int = 101, settings: QuadratureSettings | None = None
) -> float:
    """Worst violation of M >= 0 on [0, 1/2] and M <= 0 on [1/2, 1].

    Requires the symmetric nonnegative hypotheses under which the sign
    pattern holds.
    """
    if not p.g_symmetric:
        raise SymmetryViolationError("sign pattern requires a symmetric weight")
    if not p.g_nonnegative:
        raise NonnegativityError("sign pattern requires a nonnegative weight")
    worst = 0.0
    for i in range(grid):
        t = i / (grid - 1)
        m = m_value(p, t, settings)
        violation = max(0.0, -m) if t <= 0.5 else max(0.0, m)
        if violation > worst:
            worst = violation
    return worst


def m_abs_integral(
    p: ProblemSpec, settings: QuadratureSettings | None = None
) -> float:
    """integral over [0, 1] of |M(t)|, by nested adaptive quadrature."""
    outer = settings or DEFAULT_SETTINGS
    inner = outer.scaled(_INNER_FACTOR)

    def abs_m(t: float) -> float:
        return abs(m_value(p, t, inner))

    # |M| generically has a kink at t = 1/2 where M changes sign.
    return integrate(abs_m, 0.0, 0.5, outer) + integrate(abs_m, 0.5, 1.0, outer)


def m_integral(p: ProblemSpec, settings: QuadratureSettings | None = None) -> float:
    """integral over [0, 1] of M(t); vanishes for symmetric weights."""
    outer = settings or DEFAULT_SETTINGS
    inner = outer.scaled(_INNER_FACTOR)
    return integrate(lambda t: m_value(p, t, inner), 0.0, 1.0, outer)


def holder_weight_integral(p_exp: float) -> float:
    """integral over [0, 1] of |t - 1/2|^(1/p), in closed form."""
    return 0.5 ** (1.0 / p_exp) * p_exp / (p_exp + 1.0)


def _check_conjugate(exponents: tuple) -> tuple:
    p_exp, q_exp = float(exponents[0]), float(exponents[1])
    if not p_exp > 1.0:
        raise ConjugateExponentError(f"p must exceed 1, got {p_exp!r}")
    if abs(1.0 / p_exp + 1.0 / q_exp - 1.0) > 1e-12:
        raise ConjugateExponentError(
            f"1/p + 1/q = 1 violated for p={p_exp!r}, q={q_exp!r}"
        )
    return p_exp, q_exp


def m_bound_sup(
    p: ProblemSpec,
    samples: int = 1001,
    settings: QuadratureSettings | None = None,
    measured: float | None = None,
) -> BoundReport:
    """Check integral of |M| against sup-norm bound (1/2)*||g||_inf.

    ``measured`` accepts a precomputed m_abs_integral value so batch
    callers do not repeat the nested quadrature.
    """
    if not p.g_symmetric:
        raise SymmetryViolationError("the sup-norm bound requires a symmetric weight")
    if not p.g_nonnegative:
        raise NonnegativityError("the sup-norm bound requires a nonnegative weight")
    if measured is None:
        measured = m_abs_integral(p, settings)
    bound = 0.5 * sup_norm(p.g, p.a, p.b, samples)
    return BoundReport.make("m_abs_integral_sup_bound", measured, bound)


def m_bound_holder(
    p: ProblemSpec,
    exponents: tuple = (2.0, 2.0),
    settings: QuadratureSettings | None = None,
    measured: float | None = None,
) -> BoundReport:
    """Check integral of |M| against 2*||g||_q * int |t-1/2|^(1/p) dt."""
    p_exp, q_exp = _check_conjugate(exponents)
    if measured is None:
        measured = m_abs_integral(p, settings)
    bound = (
        2.0
        * q_norm(p.g_param, q_exp, settings, breakpoints=p.g_breakpoints_s)
        * holder_weight_integral(p_exp)
    )
    return BoundReport.make(f"m_abs_integral_holder_bound_p{p_exp:g}", measured, bound)


# ---------------------------------------------------------------------------
# Trapezoid gap and the identity behind every bound


def trapezoid_gap(p: ProblemSpec, settings: QuadratureSettings | None = None) -> float:
    """Signed gap (f(a)+f(b))/2 * int(g) - int(f*g) over [a, b]."""
    bps = p.g_breakpoints
    total_g = integrate(p.g, p.a, p.b, settings, breakpoints=bps)
    total_fg = integrate(
        lambda x: p.f(x) * p.g(x), p.a, p.b, settings, breakpoints=bps
    )
    return 0.5 * (p.f(p.a) + p.f(p.b)) * total_g - total_fg


def _identity_rhs(
    p: ProblemSpec,
    mirrored: bool,
    settings: QuadratureSettings | None,
) -> float:
    outer = settings or DEFAULT_SETTINGS
    inner = outer.scaled(_INNER_FACTOR)
    a, b = p.a, p.b

    if mirrored:

        def integrand(t: float) -> float:
            return m_value(p, 1.0 - t, inner) * p.fprime_value(t * b + (1.0 - t) * a)

    else:

        def integrand(t: float) -> float:
            return m_value(p, t, inner) * p.fprime_value(t * a + (1.0 - t) * b)

    return 0.5 * p.width**2 * integrate(integrand, 0.0, 1.0, outer)


def identity_defect(
    p: ProblemSpec, settings: QuadratureSettings | None = None
) -> float:
    """|gap - (b-a)^2/2 * int_0^1 M(t) f'(ta+(1-t)b) dt|."""
    return abs(trapezoid_gap(p, settings) - _identity_rhs(p, False, settings))


def mirrored_identity_defect(
    p: ProblemSpec, settings: QuadratureSettings | None = None
) -> float:
    """Defect of the substituted form with M(1-t) and f'(tb+(1-t)a)."""
    return abs(trapezoid_gap(p, settings) - _identity_rhs(p, True, settings))
