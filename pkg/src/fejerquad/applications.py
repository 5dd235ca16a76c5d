"""Special-means inequalities and probability-moment bounds.

Both are specializations of the h-convex trapezoid bound: the means
inequality takes f(x) = x^n with a constant weight, the moment bound a
symmetric density as the weight, where the left-half mass is exactly 1/2
and the double integral collapses to S(1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    NonDensityError,
    NonIntegrableKernelError,
    NonnegativityError,
    ParameterError,
    SymmetryViolationError,
)
from .expr import Expression, numeric_derivative, parse
from .fejer import BoundReport
from .integrate import (
    DEFAULT_SETTINGS,
    QuadratureSettings,
    integrate,
    support_breakpoints,
)
from .kernel import HKernel, half_interval_kernel_integral

__all__ = [
    "MeanParams",
    "DensitySpec",
    "arithmetic_mean",
    "gen_log_mean",
    "means_bound_check",
    "means_corollary_bound",
    "lambda_moment",
    "moment_bound_check",
]


def arithmetic_mean(a: float, b: float) -> float:
    return 0.5 * (a + b)


def gen_log_mean(a: float, b: float, n: float) -> float:
    """Generalized log-mean [(b^(n+1)-a^(n+1)) / ((n+1)(b-a))]^(1/n).

    Defined here for 0 < a < b and n outside {-1, 0}.
    """
    if n == -1.0 or n == 0.0:
        raise ParameterError(f"gen_log_mean undefined for n={n!r}")
    if not 0.0 < a < b:
        raise ParameterError(f"need 0 < a < b, got a={a!r}, b={b!r}")
    base = (b ** (n + 1.0) - a ** (n + 1.0)) / ((n + 1.0) * (b - a))
    return base ** (1.0 / n)


@dataclass(frozen=True)
class MeanParams:
    """Parameters of the power-mean comparison |A(a^n,b^n) - L_n^n(a,b)|.

    n is the power of the compared means, k the kernel exponent of the
    underlying h-convexity assumption on |f'| for f(x) = x^n.
    """

    a: float
    b: float
    n: float
    k: float

    def __post_init__(self):
        if not 0.0 < self.a < self.b:
            raise ParameterError(f"need 0 < a < b, got a={self.a!r}, b={self.b!r}")
        n = self.n
        if not (n < -1.0 or -1.0 < n < 0.0 or n >= 1.0):
            raise ParameterError(
                f"n must lie in (-inf,-1) or (-1,0) or [1,inf), got {n!r}"
            )
        if self.k > 1.0 or self.k in (-1.0, -2.0):
            raise ParameterError(f"k must satisfy k <= 1, k not in {{-1,-2}}, got {self.k!r}")


def means_bound_check(mp: MeanParams) -> BoundReport:
    """Check |A(a^n, b^n) - L_n^n(a, b)| against the kernel-power bound.

    bound = |n|(b-a) / ((k+1)(k+2)) * A(a^(n-1), b^(n-1)) * [2^(-k) + k],
    which at k = 1 reduces to |n|(b-a)/4 * A(a^(n-1), b^(n-1)).
    Requires k > -1 for a finite bound.
    """
    a, b, n, k = mp.a, mp.b, mp.n, mp.k
    if k <= -1.0:
        raise NonIntegrableKernelError(
            f"the means bound is finite only for k > -1, got {k!r}"
        )
    measured = abs(
        arithmetic_mean(a**n, b**n)
        - (b ** (n + 1.0) - a ** (n + 1.0)) / ((n + 1.0) * (b - a))
    )
    slope_mean = arithmetic_mean(abs(a) ** (n - 1.0), abs(b) ** (n - 1.0))
    bound = (
        abs(n) * (b - a) / ((k + 1.0) * (k + 2.0)) * slope_mean * (0.5**k + k)
    )
    return BoundReport.make(f"means_bound_n{n:g}_k{k:g}", measured, bound)


def means_corollary_bound(a: float, b: float, n: float) -> float:
    """The k = 1 bound |n|(b-a)/4 * A(|a|^(n-1), |b|^(n-1))."""
    return abs(n) * (b - a) / 4.0 * arithmetic_mean(abs(a) ** (n - 1.0), abs(b) ** (n - 1.0))


# ---------------------------------------------------------------------------
# Random-variable moments

_DENSITY_GRID = 501
_NORMALIZATION_TOL = 1e-8


@dataclass(frozen=True)
class DensitySpec:
    """A continuous probability density on [a, b] with 0 < a < b.

    Validated nonnegative, symmetric about the midpoint, and normalized to
    one within ``normalization_defect <= 1e-8``.  Densities are rejected,
    never silently renormalized.
    """

    g: Expression
    a: float
    b: float
    normalization_defect: float
    breakpoints: tuple = ()

    @staticmethod
    def create(
        g: Expression | str,
        a: float,
        b: float,
        settings: QuadratureSettings | None = None,
        grid: int = _DENSITY_GRID,
    ) -> "DensitySpec":
        if isinstance(g, str):
            g = parse(g)
        a = float(a)
        b = float(b)
        if not 0.0 < a < b:
            raise ParameterError(f"need 0 < a < b, got a={a!r}, b={b!r}")
        xs = np.linspace(a, b, grid)
        gv = np.array([g(x) for x in xs])
        if float(np.min(gv)) < -1e-12:
            raise NonnegativityError(
                f"density takes negative value {float(np.min(gv))!r}"
            )
        sup = float(np.max(np.abs(gv)))
        defect = float(np.max(np.abs(gv - np.array([g(a + b - x) for x in xs]))))
        if defect > 1e-9 * (1.0 + sup):
            raise SymmetryViolationError(
                f"density not symmetric about the midpoint (defect {defect:.3e})"
            )
        edges = support_breakpoints(g, a, b)
        total = integrate(g, a, b, settings, breakpoints=edges)
        normalization_defect = abs(total - 1.0)
        if normalization_defect > _NORMALIZATION_TOL:
            raise NonDensityError(
                f"density integrates to {total!r}, defect {normalization_defect:.3e}"
            )
        return DensitySpec(
            g=g, a=a, b=b, normalization_defect=normalization_defect, breakpoints=edges
        )

    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)


def lambda_moment(
    d: DensitySpec, lam: float, settings: QuadratureSettings | None = None
) -> float:
    """integral of x^lam * g(x) over [a, b]."""
    return integrate(
        lambda x: x**lam * d.g(x), d.a, d.b, settings, breakpoints=d.breakpoints
    )


def moment_bound_check(
    d: DensitySpec,
    f: Expression | str,
    fprime: Expression | str | None,
    h: HKernel,
    settings: QuadratureSettings | None = None,
) -> BoundReport:
    """Check |(f(a)+f(b))/2 - int f g| <= (b-a)/2 (|f'(a)|+|f'(b)|) S(1/2).

    Uses that the left-half mass of a symmetric density is exactly 1/2,
    so only the half-interval kernel integral S(1/2) enters.  For f = x
    and a power kernel t^k the bound is exactly (b-a)/(k+1).
    """
    if isinstance(f, str):
        f = parse(f)
    if isinstance(fprime, str):
        fprime = parse(fprime)
    base = settings or DEFAULT_SETTINGS

    def fp(x: float) -> float:
        return fprime(x) if fprime is not None else numeric_derivative(f, x)

    measured = abs(
        0.5 * (f(d.a) + f(d.b))
        - integrate(
            lambda x: f(x) * d.g(x), d.a, d.b, base, breakpoints=d.breakpoints
        )
    )
    slopes = abs(fp(d.a)) + abs(fp(d.b))
    bound = 0.5 * (d.b - d.a) * slopes * half_interval_kernel_integral(h, base)
    return BoundReport.make(f"moment_bound_{h.describe()}", measured, bound)
